"""Readers and writers for the plain-text file formats used by the CLI.

Formats:

* degree file: whitespace/newline separated nonnegative integers, any order
* degree-function file: first token M, then M + 1 reals (f(0) then the cell values)
* graph file: first line ``n``, then one ``u v`` line per edge (0-based, u < v)
* beta file: n reals, one per line
* motif file: first line ``k``, then ``a b`` edge lines (1-based)
"""
import json
from pathlib import Path

import numpy as np

from .degree_sequences import DegreeFunction
from .exceptions import ParseError
from .graph_limits import MotifGraph
from .graphs import SimpleGraph

SCHEMA = "degseq-kit/1"


def _tokens(text):
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        for tok in body.split():
            yield lineno, tok


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", path=path) from exc


def parse_degrees(text, path=None, integer=True):
    values = []
    for lineno, tok in _tokens(text):
        try:
            v = int(tok) if integer else float(tok)
        except ValueError:
            kind = "integer" if integer else "number"
            raise ParseError(f"expected a nonnegative {kind}, got {tok!r}", path=path, line=lineno) from None
        if not integer and not np.isfinite(v):
            raise ParseError(f"non-finite value {tok!r}", path=path, line=lineno)
        if v < 0:
            raise ParseError(f"negative degree {tok}", path=path, line=lineno)
        values.append(v)
    if not values:
        raise ParseError("no degrees found", path=path)
    return np.asarray(values, dtype=np.int64 if integer else float)


def read_degrees(path, integer=True):
    return parse_degrees(_read(path), path=path, integer=integer)


def write_degrees(path, degrees):
    Path(path).write_text(" ".join(str(int(d)) for d in degrees) + "\n")


def parse_degree_function(text, path=None):
    toks = list(_tokens(text))
    if not toks:
        raise ParseError("empty degree-function file", path=path)
    lineno, first = toks[0]
    try:
        M = int(first)
    except ValueError:
        raise ParseError(f"expected grid size M, got {first!r}", path=path, line=lineno) from None
    if M < 1:
        raise ParseError(f"grid size must be positive, got {M}", path=path, line=lineno)
    vals = []
    for lineno, tok in toks[1:]:
        try:
            vals.append(float(tok))
        except ValueError:
            raise ParseError(f"expected a real number, got {tok!r}", path=path, line=lineno) from None
    if len(vals) != M + 1:
        raise ParseError(f"expected {M + 1} values (f(0) and {M} cells), got {len(vals)}", path=path)
    try:
        return DegreeFunction(vals[1:], f0=vals[0])
    except ValueError as exc:
        raise ParseError(str(exc), path=path) from None


def read_degree_function(path):
    return parse_degree_function(_read(path), path=path)


def write_degree_function(path, f):
    lines = [str(f.M), repr(float(f.f0))] + [repr(float(v)) for v in f.values]
    Path(path).write_text("\n".join(lines) + "\n")


def _edge_lines(text, path, skip_first=True):
    lines = [(i, line.split("#", 1)[0].split()) for i, line in enumerate(text.splitlines(), start=1)]
    lines = [(i, parts) for i, parts in lines if parts]
    if not lines:
        raise ParseError("empty file", path=path)
    head_line, head = lines[0]
    if len(head) != 1:
        raise ParseError("first line must hold a single count", path=path, line=head_line)
    try:
        count = int(head[0])
    except ValueError:
        raise ParseError(f"expected a count, got {head[0]!r}", path=path, line=head_line) from None
    edges = []
    for lineno, parts in lines[1:]:
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {' '.join(parts)!r}", path=path, line=lineno)
        try:
            edges.append((lineno, int(parts[0]), int(parts[1])))
        except ValueError:
            raise ParseError(f"non-integer vertex in {' '.join(parts)!r}", path=path, line=lineno) from None
    return count, edges


def parse_graph(text, path=None):
    n, edges = _edge_lines(text, path)
    if n < 0:
        raise ParseError("vertex count must be nonnegative", path=path, line=1)
    adj = np.zeros((n, n), dtype=bool)
    for lineno, u, v in edges:
        if not (0 <= u < v < n):
            raise ParseError(f"edge ({u}, {v}) must satisfy 0 <= u < v < {n}", path=path, line=lineno)
        if adj[u, v]:
            raise ParseError(f"duplicate edge ({u}, {v})", path=path, line=lineno)
        adj[u, v] = adj[v, u] = True
    return SimpleGraph(adj)


def read_graph(path):
    return parse_graph(_read(path), path=path)


def format_graph(G):
    return "\n".join([str(G.n)] + [f"{u} {v}" for u, v in G.edges()]) + "\n"


def write_graph(path, G):
    Path(path).write_text(format_graph(G))


def parse_beta(text, path=None):
    values = []
    for lineno, tok in _tokens(text):
        try:
            v = float(tok)
        except ValueError:
            raise ParseError(f"expected a real number, got {tok!r}", path=path, line=lineno) from None
        if not np.isfinite(v):
            raise ParseError(f"non-finite value {tok!r}", path=path, line=lineno)
        values.append(v)
    if len(values) < 2:
        raise ParseError("a beta file needs at least two values", path=path)
    return np.asarray(values)


def read_beta(path):
    return parse_beta(_read(path), path=path)


def write_beta(path, beta):
    Path(path).write_text("\n".join(repr(float(b)) for b in beta) + "\n")


def parse_motif(text, path=None):
    k, edges = _edge_lines(text, path)
    try:
        return MotifGraph(k, [(a - 1, b - 1) for _, a, b in edges], name=Path(path).stem if path else None)
    except ValueError as exc:
        raise ParseError(str(exc), path=path) from None


def read_motif(path):
    return parse_motif(_read(path), path=path)


def write_motif(path, H):
    lines = [str(H.k)] + [f"{a + 1} {b + 1}" for a, b in H.edges]
    Path(path).write_text("\n".join(lines) + "\n")


def dumps(payload):
    """Serialize a report with the schema tag first."""
    return json.dumps({"schema": SCHEMA, **payload}, indent=2, sort_keys=False)
