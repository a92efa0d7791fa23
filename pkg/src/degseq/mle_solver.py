"""Maximum likelihood for the β-model by fixed-point iteration.

The likelihood equations d_i = Σ_{j≠i} sigmoid(β_i + β_j) are rewritten as
β = φ(β) with

    φ_i(x) = log d_i − log Σ_{j≠i} 1 / (e^{−x_j} + e^{x_i}).

φ is nonexpansive in the sup norm and its second iterate is a strict
contraction on bounded sets, so the plain iteration x_{k+1} = φ(x_k)
converges geometrically whenever the MLE exists and drifts off to infinity
when it does not.
"""
import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from ._validation import check_same_length, check_square_matrix, check_vector, linf
from .beta_model import BetaVector, expected_degrees
from .degree_sequences import eg_slacks
from .exceptions import InfeasibleDegreesError

__all__ = [
    "FitConfig",
    "FitStatus",
    "FitReport",
    "phi",
    "jacobian_phi",
    "contraction_theta",
    "matrix_class_product_bound_check",
    "in_matrix_class",
    "l1_lipschitz_check",
    "two_step_ratio",
    "fit_mle",
    "posterior_mode",
    "pseudo_degrees",
    "hull_certificate",
]


@dataclass(frozen=True)
class FitConfig:
    tol: float = 1e-10
    max_iter: int = 5000
    divergence_bound: float = 50.0
    x0: tuple | None = None

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValueError(f"max_iter must be a positive integer, got {self.max_iter}")
        if not self.divergence_bound > 0:
            raise ValueError(f"divergence_bound must be positive, got {self.divergence_bound}")
        if self.x0 is not None:
            x0 = tuple(float(v) for v in np.asarray(self.x0, dtype=float).ravel())
            object.__setattr__(self, "x0", x0)

    def to_dict(self):
        return {"tol": self.tol, "max_iter": self.max_iter, "divergence_bound": self.divergence_bound}


class FitStatus(str, enum.Enum):
    CONVERGED = "Converged"
    DIVERGED = "Diverged"
    MAX_ITER = "MaxIterReached"
    INFEASIBLE = "InfeasibleDegrees"


@dataclass
class FitReport:
    status: FitStatus
    beta_hat: np.ndarray | None
    iterations: int
    residual_linf: float
    theta_hat: float | None
    error_bound: float
    initial_error_bound: float = math.inf
    max_iterate_norm: float = 0.0
    certified_theta: float | None = None
    message: str = ""
    config: FitConfig = field(default_factory=FitConfig)

    @property
    def converged(self):
        return self.status is FitStatus.CONVERGED

    def to_dict(self):
        def num(v):
            if v is None:
                return None
            v = float(v)
            return v if math.isfinite(v) else None

        return {
            "status": self.status.value,
            "beta_hat": None if self.beta_hat is None else [float(b) for b in self.beta_hat],
            "iterations": self.iterations,
            "residual_linf": num(self.residual_linf),
            "theta_hat": num(self.theta_hat),
            "error_bound": num(self.error_bound),
            "initial_error_bound": num(self.initial_error_bound),
            "max_iterate_norm": num(self.max_iterate_norm),
            "certified_theta": num(self.certified_theta),
            "message": self.message,
            "config": self.config.to_dict(),
        }


def _as_array(x):
    if isinstance(x, BetaVector):
        return x.beta
    return check_vector(x, name="x", min_length=2)


def _check_degrees(d, n):
    d = check_vector(d, name="d")
    if d.shape[0] != n:
        raise ValueError(f"d has length {d.shape[0]}, expected {n}")
    bad = np.flatnonzero(d <= 0)
    if bad.size:
        raise InfeasibleDegreesError(
            f"degree target d[{bad[0]}] = {d[bad[0]]:g} is not positive; log d is undefined"
        )
    return d


def _log_r(x):
    # log r_ij = −log(e^{−x_j} + e^{x_i}); diagonal excluded
    lr = -np.logaddexp(-x[None, :], x[:, None])
    np.fill_diagonal(lr, -np.inf)
    return lr


def _row_logsumexp(a):
    m = np.max(a, axis=1, keepdims=True)
    return (m + np.log(np.sum(np.exp(a - m), axis=1, keepdims=True)))[:, 0]


def _phi_unchecked(x, log_d):
    return log_d - _row_logsumexp(_log_r(x))


def phi(x, d):
    """The fixed-point map whose fixed points solve the likelihood equations."""
    x = _as_array(x)
    d = _check_degrees(d, x.shape[0])
    return _phi_unchecked(x, np.log(d))


def jacobian_phi(x, d):
    """Analytic Jacobian of :func:`phi` (which does not depend on ``d``).

    Every row has absolute sum exactly one: positive diagonal, negative
    off-diagonal entries.
    """
    x = _as_array(x)
    _check_degrees(d, x.shape[0])
    lr = _log_r(x)
    q = np.exp(lr - _row_logsumexp(lr)[:, None])
    s = x[:, None] + x[None, :]
    jac = -expit(-s) * q
    np.fill_diagonal(jac, np.sum(expit(s) * q, axis=1))
    return jac


def contraction_theta(K, n):
    """Certified two-step sup-norm contraction factor for points bounded by ``K``.

    1 − 2(n−2)δ²/(n−1) with δ = e^{−4K}/2.
    """
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    if K < 0:
        raise ValueError(f"K must be nonnegative, got {K}")
    delta = 0.5 * math.exp(-4.0 * K)
    return 1.0 - 2.0 * (n - 2) * delta**2 / (n - 1)


_CLASS_TOL = 1e-12


def in_matrix_class(A, delta):
    """Membership in L_n(δ): |A|_∞ ≤ 1, a_ii ≥ δ, a_ij ≤ −δ/(n−1) off the diagonal."""
    A = check_square_matrix(A)
    n = A.shape[0]
    if n < 2:
        return False
    off = A[~np.eye(n, dtype=bool)]
    return bool(
        np.max(np.abs(A).sum(axis=1)) <= 1 + _CLASS_TOL
        and np.all(np.diag(A) >= delta - _CLASS_TOL)
        and np.all(off <= -delta / (n - 1) + _CLASS_TOL)
    )


def matrix_class_product_bound_check(A, B, delta):
    """Whether |AB|_∞ ≤ 1 − 2(n−2)δ²/(n−1) for A, B in L_n(δ) (always true)."""
    A = check_square_matrix(A, "A")
    B = check_square_matrix(B, "B")
    if A.shape != B.shape:
        raise ValueError("A and B must have the same shape")
    if not delta > 0:
        raise ValueError("delta must be positive")
    if not (in_matrix_class(A, delta) and in_matrix_class(B, delta)):
        raise ValueError(f"A and B must belong to the class L_n(delta) with delta={delta}")
    n = A.shape[0]
    bound = 1.0 - 2.0 * (n - 2) * delta**2 / (n - 1)
    return bool(np.max(np.abs(A @ B).sum(axis=1)) <= bound + _CLASS_TOL)


def l1_lipschitz_check(x, y, d):
    """Whether |φ(x) − φ(y)|_1 ≤ 2e^{2K}|x − y|_1 with K = max(|x|_∞, |y|_∞)."""
    x, y = _as_array(x), _as_array(y)
    check_same_length(x, y, ("x", "y"))
    K = max(linf(x), linf(y))
    lhs = float(np.sum(np.abs(phi(x, d) - phi(y, d))))
    rhs = 2.0 * math.exp(2.0 * K) * float(np.sum(np.abs(x - y)))
    return lhs <= rhs + 1e-13 * x.shape[0]


def two_step_ratio(x, y, d):
    """Measured |φ²(x) − φ²(y)|_∞ / |x − y|_∞, with the sup-norm bound K′
    over x, y, φ(x), φ(y) that the certified factor depends on."""
    x, y = _as_array(x), _as_array(y)
    px, py = phi(x, d), phi(y, d)
    K = max(linf(x), linf(y), linf(px), linf(py))
    diff = linf(x - y)
    if diff == 0:
        return 0.0, K
    return linf(phi(px, d) - phi(py, d)) / diff, K


def hull_certificate(d, tol=None):
    """Classify ``d`` against the convex hull of degree sequences.

    Returns ``("outside", msg)``, ``("boundary", msg)`` or ``("open", "")``.
    The hull satisfies 0 ≤ d_i ≤ n−1 and every real Erdős–Gallai inequality,
    and the set of expected degree vectors is open (n ≥ 3), so ``outside``
    and ``boundary`` both rule out a finite MLE. ``open`` certifies nothing.
    """
    d = np.asarray(d, dtype=float)
    n = d.shape[0]
    if tol is None:
        tol = 1e-9 * max(1.0, float(n))
    if np.any(d > n - 1 + tol):
        i = int(np.argmax(d))
        return "outside", f"d[{i}] = {d[i]:g} exceeds n - 1 = {n - 1}"
    order = np.argsort(-d, kind="stable")
    slack = eg_slacks(d[order])
    k = int(np.argmin(slack))
    if slack[k] < -tol:
        return "outside", f"Erdős–Gallai inequality k={k + 1} violated (slack {slack[k]:.3g})"
    top = np.flatnonzero(np.abs(d - (n - 1)) <= tol)
    if top.size:
        return "boundary", f"d[{top[0]}] = n - 1 forces probability-one edges; the MLE is at infinity"
    if n >= 3 and slack[k] <= tol:
        return "boundary", f"Erdős–Gallai inequality k={k + 1} is tight; the MLE is at infinity"
    return "open", ""


def _theta_hat(residuals):
    """Largest two-step ratio r_{k+2}/r_k over the trailing min(50, K/2) pairs."""
    count = len(residuals) - 2
    if count <= 0:
        return 0.0
    window = max(1, min(50, len(residuals) // 2, count))
    r = np.asarray(residuals)
    num, den = r[-window:], r[-window - 2:-2]
    ok = den > 0
    if not np.any(ok):
        return 0.0
    return float(np.max(num[ok] / den[ok]))


def fit_mle(d, cfg=None):
    """Solve the β-model likelihood equations for degree targets ``d``.

    ``d`` may be real-valued. Never raises for infeasible or divergent
    targets; the outcome is in ``FitReport.status``.
    """
    cfg = cfg or FitConfig()
    d = check_vector(d, name="d", min_length=2)
    n = d.shape[0]

    def report(status, message, **kw):
        base = dict(
            beta_hat=None, iterations=0, residual_linf=math.inf, theta_hat=None, error_bound=math.inf
        )
        base.update(kw)
        return FitReport(status=status, message=message, config=cfg, **base)

    if np.any(d <= 0):
        i = int(np.argmin(d))
        return report(FitStatus.INFEASIBLE, f"d[{i}] = {d[i]:g} is not positive; phi is undefined")
    verdict, why = hull_certificate(d)
    if verdict == "outside":
        return report(FitStatus.INFEASIBLE, why)
    if verdict == "boundary":
        return report(FitStatus.DIVERGED, why)

    x = np.zeros(n) if cfg.x0 is None else check_vector(cfg.x0, name="x0").copy()
    if x.shape[0] != n:
        raise ValueError(f"x0 has length {x.shape[0]}, expected {n}")
    log_d = np.log(d)
    residuals = []
    max_norm = linf(x)
    status = None
    message = ""
    for _ in range(cfg.max_iter):
        x_new = _phi_unchecked(x, log_d)
        residuals.append(linf(x_new - x))
        x = x_new
        max_norm = max(max_norm, linf(x))
        if residuals[-1] <= cfg.tol:
            status = FitStatus.CONVERGED
            break
        if linf(x) > cfg.divergence_bound:
            status = FitStatus.DIVERGED
            message = f"iterate left the ball of radius {cfg.divergence_bound:g}"
            break
    if status is None:
        r = residuals
        if len(r) > 100 and r[-1] >= r[-101]:
            status = FitStatus.DIVERGED
            message = "residual did not decrease over the last 100 iterations"
        else:
            status = FitStatus.MAX_ITER
            message = f"no convergence within {cfg.max_iter} iterations"

    theta = _theta_hat(residuals)
    if theta < 1.0:
        error_bound = 2.0 * residuals[-1] / (1.0 - theta)
        initial_bound = 2.0 * residuals[0] / (1.0 - theta)
    else:
        theta, error_bound, initial_bound = None, math.inf, math.inf

    if status is FitStatus.CONVERGED:
        gap = linf(expected_degrees(x) - d)
        if gap > 10 * cfg.tol * n:
            raise RuntimeError(f"converged iterate misses the likelihood equations by {gap:.3g}")

    return FitReport(
        status=status,
        beta_hat=x if status is not FitStatus.DIVERGED else None,
        iterations=len(residuals),
        residual_linf=residuals[-1],
        theta_hat=theta,
        error_bound=error_bound,
        initial_error_bound=initial_bound,
        max_iterate_norm=max_norm,
        certified_theta=contraction_theta(max_norm, n) if n >= 3 else None,
        message=message,
        config=cfg,
    )


def pseudo_degrees(d_obs, n0, d0):
    """Posterior pseudo-degrees (d_obs + n0·d0) / (n0 + 1) of the conjugate prior."""
    d_obs = check_vector(d_obs, name="d_obs", min_length=2)
    d0 = check_vector(d0, name="d0", min_length=2)
    check_same_length(d_obs, d0, ("d_obs", "d0"))
    n = d_obs.shape[0]
    if not (isinstance(n0, (int, float)) and math.isfinite(n0) and n0 > 0):
        raise ValueError(f"n0 must be positive, got {n0}")
    if np.any(d0 <= 0) or np.any(d0 >= n - 1):
        raise ValueError("prior mean d0 must lie strictly inside (0, n - 1) componentwise")
    return (d_obs + n0 * d0) / (n0 + 1.0)


def posterior_mode(d_obs, n0, d0, cfg=None):
    """Mode of the conjugate posterior: the MLE at the pseudo-degrees."""
    return fit_mle(pseudo_degrees(d_obs, n0, d0), cfg)

