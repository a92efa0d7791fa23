"""Homomorphism densities and the graphon limit of graphs with given degrees.

For an interior degree function f the limit graphon is
W(x, y) = sigmoid(g(x) + g(y)) with g the unique nonincreasing solution of
f(x) = ∫ W(x, y) dy. Here g is represented as a step function on a uniform
grid, exactly like :class:`~degseq.degree_sequences.DegreeFunction`.
"""
import re
import string
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import expit

from ._validation import check_vector, linf
from .beta_model import sample_graph
from .degree_sequences import interior_report
from .exceptions import BudgetExceededError, FitDivergedError, NotInteriorError, UnsupportedMotifError
from .graphs import SimpleGraph
from .mle_solver import FitConfig, FitStatus, fit_mle

__all__ = [
    "MotifGraph",
    "GraphonFit",
    "HomDensity",
    "hom_count",
    "hom_density_graph",
    "hom_density_graphon",
    "fit_graphon",
    "psi",
    "psi_inverse",
    "canonicalize_g",
    "predicted_vs_empirical",
    "PredictedVsEmpirical",
]

MAX_MOTIF_VERTICES = 8
DEFAULT_BUDGET = 2e9


class MotifGraph:
    """Small simple graph H on vertices ``0..k-1`` (k ≤ 8)."""

    __slots__ = ("_k", "_edges", "name")

    def __init__(self, k, edges, name=None):
        k = int(k)
        if k < 1:
            raise ValueError("a motif needs at least one vertex")
        if k > MAX_MOTIF_VERTICES:
            raise UnsupportedMotifError(f"motifs are limited to {MAX_MOTIF_VERTICES} vertices, got {k}")
        seen = set()
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise ValueError(f"self-loop at motif vertex {a}")
            if not (0 <= a < k and 0 <= b < k):
                raise ValueError(f"motif edge ({a}, {b}) out of range for k={k}")
            e = (min(a, b), max(a, b))
            if e in seen:
                raise ValueError(f"duplicate motif edge {e}")
            seen.add(e)
        self._k = k
        self._edges = tuple(sorted(seen))
        self.name = name

    @classmethod
    def edge(cls):
        return cls(2, [(0, 1)], name="edge")

    @classmethod
    def triangle(cls):
        return cls(3, [(0, 1), (1, 2), (0, 2)], name="triangle")

    @classmethod
    def path(cls, k):
        return cls(k, [(i, i + 1) for i in range(k - 1)], name=f"path{k}")

    @classmethod
    def cycle(cls, k):
        return cls(k, [(i, (i + 1) % k) for i in range(k)], name=f"cycle{k}")

    @classmethod
    def complete(cls, k):
        return cls(k, [(i, j) for i in range(k) for j in range(i + 1, k)], name=f"K{k}")

    @classmethod
    def star(cls, leaves):
        return cls(leaves + 1, [(0, i) for i in range(1, leaves + 1)], name=f"star{leaves}")

    @property
    def k(self):
        return self._k

    @property
    def edges(self):
        return self._edges

    @property
    def num_edges(self):
        return len(self._edges)

    def relabel(self, perm):
        perm = list(perm)
        return MotifGraph(self._k, [(perm[a], perm[b]) for a, b in self._edges], name=self.name)

    def __eq__(self, other):
        if not isinstance(other, MotifGraph):
            return NotImplemented
        return self._k == other._k and self._edges == other._edges

    def __hash__(self):
        return hash((self._k, self._edges))

    def __repr__(self):
        label = f"{self.name}, " if self.name else ""
        return f"MotifGraph({label}k={self._k}, edges={list(self._edges)})"


@dataclass(frozen=True)
class HomDensity:
    value: float
    motif: MotifGraph
    source: str  # "FiniteGraph" or "Graphon"


def _einsum_spec(H):
    used = sorted({v for e in H.edges for v in e})
    letters = {v: string.ascii_letters[i] for i, v in enumerate(used)}
    return ",".join(letters[a] + letters[b] for a, b in H.edges) + "->", len(used)


def _contract(H, mat):
    spec, _ = _einsum_spec(H)
    return np.einsum(spec, *([mat] * H.num_edges), optimize="greedy")


def _enumerate_count(H, adj):
    """Count homomorphisms by depth-first search over partial maps.

    Motif vertices are placed in an order that keeps each new vertex adjacent
    to an already placed one when possible; a vertex's candidate images are
    the common neighbours of its placed neighbours' images.
    """
    k = H.k
    n = adj.shape[0]
    nbrs = {v: set() for v in range(k)}
    for a, b in H.edges:
        nbrs[a].add(b)
        nbrs[b].add(a)
    order = []
    remaining = set(range(k))
    while remaining:
        placed = set(order)
        v = max(remaining, key=lambda u: (len(nbrs[u] & placed), len(nbrs[u]), -u))
        order.append(v)
        remaining.remove(v)
    back = [[order.index(u) for u in nbrs[v] if order.index(u) < t] for t, v in enumerate(order)]
    full = np.ones(n, dtype=bool)
    image = [0] * k

    def candidates(t):
        if not back[t]:
            return full
        mask = adj[image[back[t][0]]]
        for s in back[t][1:]:
            mask = mask & adj[image[s]]
        return mask

    def count(t):
        cand = candidates(t)
        if t == k - 1:
            return int(np.count_nonzero(cand))
        total = 0
        for u in np.flatnonzero(cand):
            image[t] = u
            total += count(t + 1)
        return total

    return count(0)


def hom_count(H, G, method="enumerate"):
    """Number of edge-preserving maps V(H) → V(G)."""
    if H.k > MAX_MOTIF_VERTICES:
        raise UnsupportedMotifError(f"motifs are limited to {MAX_MOTIF_VERTICES} vertices")
    adj = G.adjacency if isinstance(G, SimpleGraph) else np.asarray(G, dtype=bool)
    n = adj.shape[0]
    if method == "enumerate":
        return _enumerate_count(H, adj)
    if method == "contract":
        if H.num_edges == 0:
            return n**H.k
        _, used = _einsum_spec(H)
        value = _contract(H, adj.astype(np.int64))
        return int(value) * n ** (H.k - used)
    raise ValueError(f"unknown method {method!r}")


def hom_density_graph(H, G, method="enumerate"):
    """t(H, G) = |hom(H, G)| / n^k.

    ``method="enumerate"`` walks all maps with pruning; ``"contract"`` sums the
    same product of adjacency entries by tensor contraction. Both are exact.
    """
    n = G.n if isinstance(G, SimpleGraph) else np.asarray(G).shape[0]
    return hom_count(H, G, method=method) / float(n) ** H.k


@dataclass(frozen=True, eq=False)
class GraphonFit:
    """Step-function g on a uniform grid of M cells, plus g(0).

    ``g[i]`` is the value on ((i)/M, (i+1)/M]; W(x, y) = sigmoid(g(x) + g(y)).
    """

    g: np.ndarray
    g0: float
    residual: float = float("nan")
    iterations: int = 0
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        g = check_vector(self.g, name="g").copy()
        g.setflags(write=False)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "g0", float(self.g0))

    @property
    def M(self):
        return int(self.g.shape[0])

    def g_at(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.clip(np.ceil(x * self.M - 1e-9).astype(np.int64), 0, self.M)
        out = np.where(idx == 0, self.g0, self.g[np.maximum(idx - 1, 0)])
        return out if out.ndim else float(out)

    def g_at_index(self, i, n):
        """g(i/n) for integers ``i`` in ``0..n``."""
        i = np.asarray(i, dtype=np.int64)
        cell = (i * self.M + n - 1) // n
        return np.where(cell == 0, self.g0, self.g[np.maximum(cell - 1, 0)])

    def W(self, x, y):
        return expit(self.g_at(x) + self.g_at(y))

    def W_grid(self):
        """M×M matrix of cell values of W."""
        return expit(self.g[:, None] + self.g[None, :])

    def degree_values(self):
        """∫ W(x_i, y) dy at every cell, exact for the step representation."""
        return self.W_grid().mean(axis=1)

    def to_dict(self):
        return {
            "M": self.M,
            "g0": self.g0,
            "g": [float(v) for v in self.g],
            "residual": float(self.residual),
        }


def _coarsen(W, grid):
    M = W.shape[0]
    if grid >= M:
        return W
    if M % grid:
        raise ValueError(f"grid {grid} must divide the fit size {M}")
    b = M // grid
    return W.reshape(grid, b, grid, b).mean(axis=(1, 3))


def _flop_estimate(spec, operands):
    _, info = np.einsum_path(spec, *operands, optimize="greedy")
    m = re.search(r"Optimized FLOP count:\s*([0-9.eE+]+)", info)
    if m:
        return float(m.group(1))
    return float(operands[0].shape[0]) ** len(set(spec) - set(",->"))


def hom_density_graphon(H, fit, grid=None, budget=DEFAULT_BUDGET):
    """t(H, W) = ∫ Π_{ij∈E(H)} W(x_i, x_j) dx over [0, 1]^k.

    Summed over grid cells, which is exact for the step graphon. Motifs with
    four or more vertices default to a 64-cell grid (W block-averaged).
    """
    if H.k > MAX_MOTIF_VERTICES:
        raise UnsupportedMotifError(f"motifs are limited to {MAX_MOTIF_VERTICES} vertices")
    if H.num_edges == 0:
        return 1.0
    if grid is None:
        grid = fit.M if H.k < 4 else min(fit.M, 64)
    W = _coarsen(fit.W_grid(), grid)
    m = W.shape[0]
    spec, used = _einsum_spec(H)
    operands = [W] * H.num_edges
    cost = _flop_estimate(spec, operands)
    if cost > budget:
        raise BudgetExceededError(
            f"motif {H!r} on a {m}-cell grid needs about {cost:.3g} flops (budget {budget:.3g}); lower grid"
        )
    return float(np.einsum(spec, *operands, optimize="greedy")) / float(m) ** used


def fit_graphon(f, n_grid=256, cfg=None, eps=1e-9, max_corrections=100):
    """Solve for g on an ``n_grid``-cell grid with the MLE iteration.

    The likelihood equations at size n = n_grid with targets n·f(i/n) omit the
    diagonal term sigmoid(2 g_i) that ∫ W(x, y) dy includes, which biases g
    by O(1/n). The targets are therefore corrected to n·f − sigmoid(2 g) and
    refit from the previous solution until g settles. ``residual`` is
    max_i |f(i/n) − ∫ W(x_i, y) dy|, exact for the step representation.
    """
    report = interior_report(f, eps)
    if not report.interior:
        raise NotInteriorError(f"degree function is not interior: {report.diagnosis()}", report)
    if n_grid < 3:
        raise ValueError("n_grid must be at least 3")
    cfg = cfg or FitConfig()
    base = f.at_index(np.arange(1, n_grid + 1), n_grid)
    targets = n_grid * base
    result = fit_mle(targets, cfg)
    iterations = result.iterations
    corrections = 0
    while result.status is FitStatus.CONVERGED and corrections < max_corrections:
        g = result.beta_hat
        result = fit_mle(targets - expit(2 * g), replace(cfg, x0=g))
        iterations += result.iterations
        corrections += 1
        if result.status is FitStatus.CONVERGED and linf(result.beta_hat - g) <= cfg.tol:
            break
    if result.status is not FitStatus.CONVERGED:
        raise FitDivergedError(f"graphon fit failed: {result.status.value} ({result.message})", result)
    g = result.beta_hat
    fit = GraphonFit(g=g, g0=g[0], iterations=iterations, extra={"fit": result, "corrections": corrections})
    return replace(fit, residual=linf(base - fit.degree_values()))


def _g_of(fit):
    return fit.g if isinstance(fit, GraphonFit) else check_vector(fit, name="g")


def psi(z, fit):
    """ψ(z) = ∫ sigmoid(z + g(y)) dy, exact over the cells of g."""
    g = _g_of(fit)
    z = np.asarray(z, dtype=float)
    out = expit(z[..., None] + g).mean(axis=-1)
    return out if out.ndim else float(out)


def _psi_inverse_many(y, g, tol=1e-13):
    y = np.asarray(y, dtype=float)
    lo = np.full(y.shape, -1.0)
    hi = np.full(y.shape, 1.0)
    # expand brackets geometrically
    for _ in range(64):
        low_bad = psi(lo, g) > y
        high_bad = psi(hi, g) < y
        if not (np.any(low_bad) or np.any(high_bad)):
            break
        lo = np.where(low_bad, 2 * lo, lo)
        hi = np.where(high_bad, 2 * hi, hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        below = psi(mid, g) < y
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= tol * np.maximum(1.0, np.abs(mid))):
            break
    return 0.5 * (lo + hi)


def psi_inverse(y, fit):
    """Solve ψ(z) = y by bisection; ``y`` must lie in (0, 1)."""
    y_arr = np.asarray(y, dtype=float)
    if np.any(~(y_arr > 0)) or np.any(~(y_arr < 1)):
        raise ValueError("y must lie strictly inside (0, 1)")
    out = _psi_inverse_many(y_arr, _g_of(fit))
    return out if out.ndim else float(out)


def _self_consistent(g, target, tol=1e-14, max_iter=100):
    """Newton's method for (1/M) Σ_j sigmoid(g_i + g_j) = target_i.

    The system is the gradient of the strictly convex
    (1/2M) Σ_{ij} softplus(g_i + g_j) − Σ_i target_i g_i, so a backtracking
    Newton iteration converges from any start.
    """
    M = g.shape[0]

    def objective(h):
        s = h[:, None] + h[None, :]
        return 0.5 * np.logaddexp(0.0, s).sum() / M - target @ h

    g = g.copy()
    for _ in range(max_iter):
        S = expit(g[:, None] + g[None, :])
        grad = S.mean(axis=1) - target
        if linf(grad) <= tol:
            break
        D = S * (1 - S) / M
        H = D + np.diag(D.sum(axis=1))
        step = np.linalg.solve(H, grad)
        t, f0 = 1.0, objective(g)
        while objective(g - t * step) > f0 + 1e-16 * abs(f0) and t > 1e-8:
            t *= 0.5
        g = g - t * step
    return g


def canonicalize_g(fit, f):
    """Make f(x) = ∫ W(x, y) dy hold at every grid point.

    The discrete fit misses the continuum equation by O(1/M) (it excludes the
    diagonal term). The grid system is solved to self-consistency and then g
    is reset pointwise to ψ⁻¹(f(x)), including g(0) = ψ⁻¹(f(0)). At the
    self-consistent point the pointwise pass is a no-op, so the result is
    idempotent.
    """
    M = fit.M
    target = f.at_index(np.arange(1, M + 1), M)
    g = _self_consistent(np.asarray(fit.g, dtype=float), target)
    g = _psi_inverse_many(target, g)
    g0 = float(_psi_inverse_many(np.array([f.f0]), g)[0])
    out = replace(fit, g=g, g0=g0)
    return replace(out, residual=linf(target - out.degree_values()))


@dataclass(frozen=True)
class PredictedVsEmpirical:
    t_graphon: float
    t_samples: tuple
    fit: GraphonFit = field(compare=False, repr=False, default=None)

    @property
    def max_deviation(self):
        if not self.t_samples:
            return 0.0
        return float(np.max(np.abs(np.asarray(self.t_samples) - self.t_graphon)))


def predicted_vs_empirical(H, f, n, trials, seed, n_grid=256, cfg=None, fit=None):
    """Compare t(H, W) of the limit graphon with t(H, G) of β-model samples.

    Samples use β_i = g(i/n) on ``n`` vertices; each trial gets its own
    substream of ``seed``.
    """
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    if fit is None:
        fit = canonicalize_g(fit_graphon(f, n_grid, cfg), f)
    t_graphon = hom_density_graphon(H, fit)
    beta = fit.g_at_index(np.arange(1, n + 1), n)
    streams = np.random.SeedSequence(seed).spawn(trials)
    samples = tuple(
        hom_density_graph(H, sample_graph(beta, np.random.default_rng(s))) for s in streams
    )
    return PredictedVsEmpirical(t_graphon=t_graphon, t_samples=samples, fit=fit)

