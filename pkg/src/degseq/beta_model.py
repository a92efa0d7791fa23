"""The β-model: independent edges with P(i ~ j) = e^{β_i+β_j} / (1 + e^{β_i+β_j})."""
import numpy as np
from scipy.special import expit

from ._validation import check_random_state, check_same_length, check_vector
from .graphs import SimpleGraph

__all__ = [
    "BetaVector",
    "edge_prob",
    "edge_prob_matrix",
    "expected_degrees",
    "sample_graph",
    "log_likelihood",
    "log_partition",
]

# rows per block when streaming over pairs
_BLOCK = 512


class BetaVector:
    """Finite parameter vector of the β-model (n ≥ 2)."""

    __slots__ = ("_beta", "_norm")

    def __init__(self, beta):
        if isinstance(beta, BetaVector):
            beta = beta.beta
        arr = check_vector(beta, name="beta", min_length=2).copy()
        arr.setflags(write=False)
        self._beta = arr
        self._norm = float(np.max(np.abs(arr)))

    @property
    def beta(self):
        return self._beta

    @property
    def n(self):
        return int(self._beta.shape[0])

    @property
    def linf(self):
        return self._norm

    def __array__(self, dtype=None, copy=None):
        return self._beta if dtype is None else self._beta.astype(dtype)

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"BetaVector(n={self.n}, |beta|_inf={self._norm:.4g})"


def _as_beta(beta):
    if isinstance(beta, BetaVector):
        return beta.beta
    return check_vector(beta, name="beta", min_length=2)


def edge_prob(bi, bj):
    """Edge probability sigmoid(bi + bj), stable for large |bi + bj|."""
    return expit(np.add(bi, bj))


def edge_prob_matrix(beta):
    """Dense symmetric matrix of edge probabilities; the diagonal is set to zero."""
    b = _as_beta(beta)
    p = expit(b[:, None] + b[None, :])
    np.fill_diagonal(p, 0.0)
    return p


def expected_degrees(beta):
    """Expected degree of every vertex, Σ_{j≠i} sigmoid(β_i + β_j)."""
    b = _as_beta(beta)
    n = b.shape[0]
    out = np.empty(n)
    for start in range(0, n, _BLOCK):
        stop = min(start + _BLOCK, n)
        block = expit(b[start:stop, None] + b[None, :])
        rows = np.arange(start, stop)
        block[rows - start, rows] = 0.0
        out[start:stop] = block.sum(axis=1)
    return out


def sample_graph(beta, seed=None):
    """Draw a graph from the β-model.

    Pairs ``(i, j)``, ``i < j``, are visited in row-major order and each uses
    one uniform draw, so the result depends only on ``seed``.
    """
    b = _as_beta(beta)
    n = b.shape[0]
    rng = check_random_state(seed)
    iu, ju = np.triu_indices(n, k=1)
    present = rng.random(iu.shape[0]) < expit(b[iu] + b[ju])
    adj = np.zeros((n, n), dtype=bool)
    adj[iu[present], ju[present]] = True
    adj |= adj.T
    return SimpleGraph(adj)


def log_partition(beta):
    """m(β) = Σ_{i<j} log(1 + e^{β_i+β_j})."""
    b = _as_beta(beta)
    n = b.shape[0]
    total = 0.0
    for start in range(0, n, _BLOCK):
        stop = min(start + _BLOCK, n)
        s = b[start:stop, None] + b[None, :]
        mask = np.arange(n)[None, :] > np.arange(start, stop)[:, None]
        total += float(np.logaddexp(0.0, s[mask]).sum())
    return total


def log_likelihood(beta, d):
    """Σ_i β_i d_i − m(β): the log-probability of a graph with degrees ``d``.

    ``d`` may be real-valued (pseudo-degrees), in which case this is the
    corresponding exponential-family log-density. Its gradient in β is
    ``d − expected_degrees(β)``.
    """
    b = _as_beta(beta)
    d = check_vector(d, name="d")
    check_same_length(b, d, ("beta", "d"))
    return float(b @ d) - log_partition(b)
