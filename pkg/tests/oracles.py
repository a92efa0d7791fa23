"""Independent brute-force oracles shared by the unit and acceptance tests."""
import itertools
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def realizable_sequences(n):
    """Every sorted (nonincreasing) degree sequence of a simple graph on n vertices,
    found by enumerating all 2^(n choose 2) edge sets."""
    pairs = list(itertools.combinations(range(n), 2))
    m = len(pairs)
    inc = np.zeros((m, n), dtype=np.uint8)
    for e, (u, v) in enumerate(pairs):
        inc[e, u] = inc[e, v] = 1
    found = set()
    chunk = 1 << 18
    shifts = np.arange(m, dtype=np.uint32)
    for start in range(0, 1 << m, chunk):
        masks = np.arange(start, min(start + chunk, 1 << m), dtype=np.uint32)
        bits = ((masks[:, None] >> shifts) & 1).astype(np.uint8)
        deg = np.sort(bits @ inc, axis=1)[:, ::-1].astype(np.int64)
        keys = deg @ (n ** np.arange(n, dtype=np.int64))
        found.update(np.unique(keys).tolist())
    weights = n ** np.arange(n)
    out = set()
    for key in found:
        out.add(tuple(int(key // w % n) for w in weights))
    return frozenset(out)


def nonincreasing_sequences(n, top):
    """All nonincreasing integer sequences of length n with entries in [0, top]."""
    for combo in itertools.combinations_with_replacement(range(top, -1, -1), n):
        yield combo


@lru_cache(maxsize=None)
def bipartite_margins(m, n):
    """Set of (rows, cols) margin pairs realized by some m x n 0-1 matrix."""
    out = set()
    for mask in range(1 << (m * n)):
        A = [[(mask >> (i * n + j)) & 1 for j in range(n)] for i in range(m)]
        rows = tuple(sum(r) for r in A)
        cols = tuple(sum(A[i][j] for i in range(m)) for j in range(n))
        out.add((rows, cols))
    return frozenset(out)


def slack_bruteforce(d, subset):
    """Erdős–Gallai slack for an arbitrary index set B: |B|(|B|-1) + Σ_{i∉B} min(d_i,|B|) − Σ_{i∈B} d_i."""
    k = len(subset)
    inside = sum(d[i] for i in subset)
    outside = sum(min(d[i], k) for i in range(len(d)) if i not in subset)
    return k * (k - 1) + outside - inside


def central_difference(func, x, h=1e-6):
    """Jacobian of ``func`` at ``x`` by central differences, column j = ∂/∂x_j."""
    x = np.asarray(x, dtype=float)
    cols = []
    for j in range(x.shape[0]):
        e = np.zeros_like(x)
        e[j] = h
        cols.append((np.asarray(func(x + e)) - np.asarray(func(x - e))) / (2 * h))
    return np.stack(cols, axis=-1)
