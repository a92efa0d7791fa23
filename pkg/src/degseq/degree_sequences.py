"""Feasibility of degree sequences, bipartite margins and continuum degree functions.

Discrete sequences are checked with the Erdős–Gallai inequalities, bipartite
margins with Gale–Ryser, and nonincreasing step functions on [0, 1] with the
continuum analogue

    G_f(x) = ∫_x^1 min{f(y), x} dy + x² − ∫_0^x f(y) dy,

which must be strictly positive on (0, 1] (together with 0 < f < 1) for ``f``
to be an interior scaling limit of degree sequences.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_integer_vector, check_vector
from .graphs import SimpleGraph

__all__ = [
    "DegreeSequence",
    "BipartiteMargins",
    "DegreeFunction",
    "EgReport",
    "InteriorReport",
    "eg_slacks",
    "erdos_gallai_check",
    "realize_havel_hakimi",
    "min_eg_functional",
    "gale_ryser_check",
    "claim_margins_feasible",
    "continuum_eg",
    "continuum_eg_at",
    "continuum_eg_minimum",
    "interior_report",
    "is_interior",
    "discretize_limit",
    "degree_variate_check",
]


class DegreeSequence:
    """Nonnegative integer degrees, stored sorted nonincreasing.

    ``order`` is the permutation applied to the input: ``degrees == raw[order]``.
    Entries above ``n - 1`` are accepted (they simply fail the graphical check);
    ``in_range`` reports whether every entry lies in ``[0, n - 1]``.
    """

    __slots__ = ("_degrees", "_order")

    def __init__(self, degrees):
        raw = check_integer_vector(degrees, name="degrees")
        order = np.argsort(-raw, kind="stable")
        sorted_ = raw[order]
        sorted_.setflags(write=False)
        order.setflags(write=False)
        self._degrees = sorted_
        self._order = order

    @property
    def degrees(self):
        return self._degrees

    @property
    def order(self):
        return self._order

    @property
    def n(self):
        return int(self._degrees.shape[0])

    @property
    def total(self):
        return int(self._degrees.sum())

    @property
    def even_sum(self):
        return self.total % 2 == 0

    @property
    def in_range(self):
        return self.n == 0 or (int(self._degrees[0]) <= self.n - 1)

    def unsort(self, values):
        """Map a vector indexed by sorted position back to input order."""
        values = np.asarray(values)
        out = np.empty_like(values)
        out[self._order] = values
        return out

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self._degrees.tolist())

    def __eq__(self, other):
        if not isinstance(other, DegreeSequence):
            return NotImplemented
        return np.array_equal(self._degrees, other._degrees)

    def __hash__(self):
        return hash(tuple(self._degrees.tolist()))

    def __repr__(self):
        return f"DegreeSequence({self._degrees.tolist()})"


@dataclass(frozen=True)
class EgReport:
    graphical: bool
    first_violation_k: int | None
    slack: tuple
    even_sum: bool = True

    def to_dict(self):
        return {
            "graphical": self.graphical,
            "first_violation_k": self.first_violation_k,
            "even_sum": self.even_sum,
            "slack": list(self.slack),
        }


def _as_sorted_array(d):
    if isinstance(d, DegreeSequence):
        return d.degrees
    arr = np.asarray(d)
    if arr.dtype.kind not in "iu":
        arr = check_vector(arr, name="d", min_length=0)
    if arr.size > 1 and np.any(np.diff(arr) > 0):
        raise ValueError("d must be sorted nonincreasing")
    return arr


def eg_slacks(d):
    """Erdős–Gallai slacks ``E(k) = k(k-1) + Σ_{i>k} min(d_i, k) − Σ_{i≤k} d_i``.

    ``d`` must be sorted nonincreasing; real values are allowed, in which case
    the inequalities describe the convex hull of degree sequences. Entry ``k-1``
    of the result holds E(k). Integer input gives exact integer slacks.
    """
    d = _as_sorted_array(d)
    n = d.shape[0]
    if n == 0:
        return d[:0]
    integral = d.dtype.kind in "iu"
    work = d.astype(np.int64 if integral else float)
    prefix = np.concatenate(([0], np.cumsum(work)))
    total = prefix[-1]
    k = np.arange(1, n + 1, dtype=np.int64)
    # number of entries >= k; entries are nonincreasing so these form a prefix
    count_ge = np.searchsorted(-work, -k, side="right")
    top = np.maximum(count_ge, k)
    tail = (top - k) * k + (total - prefix[top])
    return k * (k - 1) + tail - prefix[k]


def erdos_gallai_check(d):
    """Decide whether ``d`` is the degree sequence of a simple graph."""
    if not isinstance(d, DegreeSequence):
        d = DegreeSequence(d)
    slack = eg_slacks(d)
    violations = np.flatnonzero(slack < 0)
    first = int(violations[0]) + 1 if violations.size else None
    even = d.even_sum
    return EgReport(
        graphical=bool(even and first is None),
        first_violation_k=first,
        slack=tuple(int(s) for s in slack),
        even_sum=even,
    )


def realize_havel_hakimi(d):
    """Construct a simple graph with degree sequence ``d``, or return None.

    Vertex ``i`` of the result is the ``i``-th entry of the sorted sequence.
    """
    if not isinstance(d, DegreeSequence):
        d = DegreeSequence(d)
    n = d.n
    if not d.even_sum or not d.in_range:
        return None
    remaining = [int(x) for x in d.degrees]
    adj = np.zeros((n, n), dtype=bool)
    for _ in range(n):
        # highest remaining degree first; ties broken by vertex index for determinism
        order = sorted(range(n), key=lambda v: (-remaining[v], v))
        v = order[0]
        need = remaining[v]
        if need == 0:
            break
        targets = order[1:need + 1]
        if len(targets) < need or remaining[targets[-1]] == 0:
            return None
        for u in targets:
            adj[u, v] = adj[v, u] = True
            remaining[u] -= 1
        remaining[v] = 0
    if any(remaining):
        return None
    return SimpleGraph(adj)


def _ceil_fraction(b, n):
    # ceil(b*n) without float noise pushing exact products up by one
    x = b * n
    r = round(x)
    return int(r) if abs(x - r) < 1e-9 else math.ceil(x)


def min_eg_functional(d, b):
    """(1/n²) · min over k ≥ bn of the Erdős–Gallai slack E(k).

    For sorted ``d`` the minimum of E(B) over all index sets of a given size is
    attained at the prefix {1..k}, so only prefixes are scanned.
    """
    if not (0 < b <= 1):
        raise ValueError(f"b must lie in (0, 1], got {b}")
    arr = _as_sorted_array(d)
    n = arr.shape[0]
    if n == 0:
        raise ValueError("empty degree sequence")
    k0 = max(1, _ceil_fraction(b, n))
    slack = eg_slacks(arr)
    return float(np.min(slack[k0 - 1:])) / n**2


@dataclass(frozen=True)
class BipartiteMargins:
    rows: tuple
    cols: tuple

    def __post_init__(self):
        rows = tuple(int(x) for x in check_integer_vector(self.rows, name="rows"))
        cols = tuple(int(x) for x in check_integer_vector(self.cols, name="cols"))
        m, n = len(rows), len(cols)
        if any(r > n for r in rows):
            raise ValueError(f"row sums must not exceed the number of columns ({n})")
        if any(c > m for c in cols):
            raise ValueError(f"column sums must not exceed the number of rows ({m})")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)

    @property
    def shape(self):
        return len(self.rows), len(self.cols)


def _conjugate(seq, length):
    return [sum(1 for s in seq if s >= i) for i in range(1, length + 1)]


def _dominated(seq, other_conj):
    ordered = sorted(seq, reverse=True)
    lhs = rhs = 0
    for k, value in enumerate(ordered):
        lhs += value
        rhs += other_conj[k] if k < len(other_conj) else 0
        if lhs > rhs:
            return False
    return True


def gale_ryser_check(margins, cols=None):
    """True iff a 0-1 matrix with the given row and column sums exists.

    Accepts a :class:`BipartiteMargins` or the two sequences ``(rows, cols)``.
    """
    if cols is not None:
        rows = [int(x) for x in margins]
        cols = [int(x) for x in cols]
    else:
        rows, cols = list(margins.rows), list(margins.cols)
    if any(x < 0 for x in rows) or any(x < 0 for x in cols):
        return False
    if sum(rows) != sum(cols):
        return False
    m, n = len(rows), len(cols)
    return _dominated(rows, _conjugate(cols, m)) and _dominated(cols, _conjugate(rows, n))


def claim_margins_feasible(p, rows, cols, delta):
    """Sufficient margin condition for a 0-1 table near a probability matrix.

    True iff the totals agree and every row (column) sum lies within
    δ²n/4 (δ²m/4) of the corresponding row (column) sum of ``p``. Whenever
    this holds a table exists, i.e. :func:`gale_ryser_check` is true too.
    """
    p = np.asarray(p, dtype=float)
    if p.ndim != 2:
        raise ValueError("p must be a matrix")
    if not (0 < delta < 0.5):
        raise ValueError(f"delta must lie in (0, 1/2), got {delta}")
    if np.any(p < delta) or np.any(p > 1 - delta):
        raise ValueError("entries of p must lie in [delta, 1 - delta]")
    m, n = p.shape
    r = check_integer_vector(rows, name="rows")
    c = check_integer_vector(cols, name="cols")
    if r.shape[0] != m or c.shape[0] != n:
        raise ValueError(f"margins of length ({r.shape[0]}, {c.shape[0]}) do not match p of shape {p.shape}")
    if r.sum() != c.sum():
        return False
    row_ok = np.all(np.abs(r - p.sum(axis=1)) <= 0.25 * delta**2 * n)
    col_ok = np.all(np.abs(c - p.sum(axis=0)) <= 0.25 * delta**2 * m)
    return bool(row_ok and col_ok)


class DegreeFunction:
    """Nonincreasing left-continuous step function f: [0, 1] → [0, 1].

    ``values[i]`` is the value on the cell ``(i/M, (i+1)/M]``; ``f0`` is f(0).
    """

    __slots__ = ("_values", "_f0")
    _TOL = 1e-12

    def __init__(self, values, f0=None):
        vals = check_vector(values, name="values", min_length=1).copy()
        f0 = float(vals[0] if f0 is None else f0)
        if not np.isfinite(f0):
            raise ValueError("f0 must be finite")
        full = np.concatenate(([f0], vals))
        if np.any(full < -self._TOL) or np.any(full > 1 + self._TOL):
            raise ValueError("degree function values must lie in [0, 1]")
        if np.any(np.diff(full) > self._TOL):
            raise ValueError("degree function must be nonincreasing")
        vals.setflags(write=False)
        self._values = vals
        self._f0 = f0

    @classmethod
    def constant(cls, p, M=1):
        return cls(np.full(M, float(p)))

    @classmethod
    def from_callable(cls, func, M):
        """Sample ``func`` at the right endpoint of each cell (left continuity)."""
        x = np.arange(1, M + 1) / M
        return cls(np.array([func(t) for t in x], dtype=float), f0=float(func(0.0)))

    @property
    def values(self):
        return self._values

    @property
    def f0(self):
        return self._f0

    @property
    def M(self):
        return int(self._values.shape[0])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.ceil(x * self.M - 1e-9).astype(np.int64)
        idx = np.clip(idx, 0, self.M)
        out = np.where(idx == 0, self._f0, self._values[np.maximum(idx - 1, 0)])
        return out if out.ndim else float(out)

    def at_index(self, i, n):
        """Value at ``i/n`` for integer ``i`` in ``0..n`` (exact cell arithmetic)."""
        i = np.asarray(i, dtype=np.int64)
        cell = (i * self.M + n - 1) // n
        return np.where(cell == 0, self._f0, self._values[np.maximum(cell - 1, 0)])

    def __eq__(self, other):
        if not isinstance(other, DegreeFunction):
            return NotImplemented
        return self._f0 == other._f0 and np.array_equal(self._values, other._values)

    def __repr__(self):
        return f"DegreeFunction(M={self.M}, f0={self._f0:g}, min={self._values.min():g}, max={self._values.max():g})"


def continuum_eg_at(f, x):
    """Exact G_f(x) for the step representation of ``f``, for any x in [0, 1]."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if np.any(x < 0) or np.any(x > 1):
        raise ValueError("x must lie in [0, 1]")
    v = f.values
    M = f.M
    csum = np.concatenate(([0.0], np.cumsum(v)))
    c = np.clip(np.ceil(x * M).astype(np.int64), 1, M)
    vc = v[c - 1]
    left = (csum[c - 1] + (x * M - (c - 1)) * vc) / M
    count_ge = np.searchsorted(-v, -x, side="right")
    top = np.maximum(count_ge, c)
    rest = (x * (top - c) + (csum[M] - csum[top])) / M
    right = (c / M - x) * np.minimum(vc, x) + rest
    out = right + x**2 - left
    return float(out[0]) if scalar else out


def continuum_eg(f):
    """G_f at the grid points i/M, i = 1..M."""
    v = f.values
    M = f.M
    i = np.arange(1, M + 1)
    x = i / M
    csum = np.concatenate(([0.0], np.cumsum(v)))
    count_ge = np.searchsorted(-v, -x, side="right")
    top = np.maximum(count_ge, i)
    right = (x * (top - i) + (csum[M] - csum[top])) / M
    return right + x**2 - csum[i] / M


def continuum_eg_minimum(f, start=0.0):
    """Exact minimum of G_f over [start, 1], with its location.

    Between consecutive breakpoints (grid points and the values of f) G_f is a
    polynomial of degree at most two, so each piece is interpolated from three
    exact evaluations and minimized in closed form.
    """
    pts = np.concatenate((np.arange(f.M + 1) / f.M, f.values, [f.f0, start, 1.0]))
    pts = np.unique(pts[(pts >= start) & (pts <= 1.0)])
    cands = [pts]
    if pts.size > 1:
        a, b = pts[:-1], pts[1:]
        mid = 0.5 * (a + b)
        ga, gm, gb = continuum_eg_at(f, a), continuum_eg_at(f, mid), continuum_eg_at(f, b)
        h = 0.5 * (b - a)
        curv = (ga - 2 * gm + gb) / (2 * h**2)
        slope = (gb - ga) / (2 * h)
        with np.errstate(divide="ignore", invalid="ignore"):
            vertex = mid - slope / (2 * curv)
        inside = (curv > 0) & (vertex > a) & (vertex < b)
        cands.append(vertex[inside])
    xs = np.concatenate(cands)
    gs = continuum_eg_at(f, xs)
    j = int(np.argmin(gs))
    return float(gs[j]), float(xs[j])


@dataclass(frozen=True)
class InteriorReport:
    bounded_away: bool  # condition (i): 0 < min f and max f < 1
    eg_positive: bool  # condition (ii): G_f > eps on (0, 1]
    min_f: float
    max_f: float
    min_eg: float
    argmin_eg: float
    eps: float = field(default=1e-9)

    @property
    def interior(self):
        return self.bounded_away and self.eg_positive

    def diagnosis(self):
        problems = []
        if not self.bounded_away:
            problems.append(
                f"condition (i) fails: f must stay strictly inside (0, 1), got range [{self.min_f:g}, {self.max_f:g}]"
            )
        if not self.eg_positive:
            problems.append(
                f"condition (ii) fails: G_f({self.argmin_eg:g}) = {self.min_eg:.3g} is not > {self.eps:g}"
            )
        return "; ".join(problems) or "interior"


def interior_report(f, eps=1e-9):
    full = np.concatenate(([f.f0], f.values))
    min_f, max_f = float(full.min()), float(full.max())
    bounded = min_f > 0 and max_f < 1
    if bounded:
        # on (0, a] with a = min(1/M, min f), G_f(x) = x(1 - f(0+)) > 0, so only
        # [a, 1] needs checking against eps
        start = min(1.0 / f.M, min_f)
        min_eg, arg = continuum_eg_minimum(f, start=start)
    else:
        grid = continuum_eg(f)
        j = int(np.argmin(grid))
        min_eg, arg = float(grid[j]), (j + 1) / f.M
    return InteriorReport(
        bounded_away=bounded,
        eg_positive=min_eg > eps,
        min_f=min_f,
        max_f=max_f,
        min_eg=min_eg,
        argmin_eg=arg,
        eps=eps,
    )


def is_interior(f, eps=1e-9):
    """Whether ``f`` lies in the interior of the set of degree scaling limits."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return interior_report(f, eps).interior


def discretize_limit(f, n):
    """Degree sequence d_i = ⌊n f(i/n)⌋ (d_1 = ⌊n f(0)⌋), repaired to an even sum."""
    if n < 2:
        raise ValueError("n must be at least 2")
    i = np.arange(1, n + 1)
    vals = f.at_index(i, n).astype(float)
    vals[0] = f.f0
    # tolerance absorbs products like 0.57 * 100 = 56.99999999999999
    d = np.floor(n * vals + 1e-9).astype(np.int64)
    d = np.minimum(d, n - 1)
    if d.sum() % 2:
        if d[0] < n - 1:
            d[0] += 1
        else:
            # d_1 = n - 1 already; a constant sequence of n - 1 has even sum, so a
            # strict descent exists and bumping just after it keeps monotonicity
            j = next(j for j in range(1, n) if d[j] < d[j - 1])
            d[j] += 1
    return DegreeSequence(d)


def degree_variate_check(D, tol=1e-12):
    """Whether the quantile function ``D`` of a [0, 1]-valued X is a limiting degree variate.

    Checks ∫_0^x D ≤ x² + ∫_x^1 min{D(y), x} dy, i.e. G_D ≥ 0, on all of (0, 1].
    """
    min_eg, _ = continuum_eg_minimum(D, start=0.0)
    return min_eg >= -tol
