"""scikit-learn style estimators wrapping the β-model and graphon fits."""
import warnings

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import ConvergenceWarning
from sklearn.utils.validation import check_is_fitted

from ._validation import check_random_state, check_vector
from .beta_model import edge_prob, edge_prob_matrix, expected_degrees, log_likelihood, sample_graph
from .degree_sequences import DegreeFunction
from .exceptions import FitDivergedError, InfeasibleDegreesError
from .graph_limits import canonicalize_g, fit_graphon, hom_density_graphon
from .graphs import SimpleGraph
from .mle_solver import FitConfig, FitStatus, fit_mle, pseudo_degrees


def _degrees_from(X):
    if isinstance(X, SimpleGraph):
        return X.degrees.astype(float)
    arr = np.asarray(X)
    if arr.ndim == 2:
        if arr.shape[0] != arr.shape[1]:
            raise ValueError(f"adjacency matrix must be square, got shape {arr.shape}")
        return SimpleGraph(arr.astype(bool)).degrees.astype(float)
    return check_vector(arr, name="X", min_length=2)


class BetaModel(BaseEstimator):
    """Maximum likelihood (or conjugate posterior mode) for the β-model.

    ``fit`` takes a degree vector, a :class:`SimpleGraph` or an adjacency
    matrix. With ``prior_strength`` and ``prior_degrees`` set, the fitted
    parameters are the posterior mode under the conjugate prior.

    Attributes
    ----------
    beta_ : ndarray of shape (n,)
    report_ : FitReport
    n_iter_ : int
    """

    def __init__(self, tol=1e-10, max_iter=5000, divergence_bound=50.0, prior_strength=None,
                 prior_degrees=None):
        self.tol = tol
        self.max_iter = max_iter
        self.divergence_bound = divergence_bound
        self.prior_strength = prior_strength
        self.prior_degrees = prior_degrees

    def _config(self):
        return FitConfig(tol=self.tol, max_iter=self.max_iter, divergence_bound=self.divergence_bound)

    def fit(self, X, y=None):
        d = _degrees_from(X)
        if self.prior_strength is not None:
            if self.prior_degrees is None:
                raise ValueError("prior_degrees is required with prior_strength")
            d = pseudo_degrees(d, self.prior_strength, self.prior_degrees)
        report = fit_mle(d, self._config())
        if report.status is FitStatus.INFEASIBLE:
            raise InfeasibleDegreesError(report.message)
        if report.status is FitStatus.DIVERGED:
            raise FitDivergedError(f"the MLE does not exist: {report.message}", report)
        if report.status is FitStatus.MAX_ITER:
            warnings.warn(report.message, ConvergenceWarning, stacklevel=2)
        self.report_ = report
        self.beta_ = report.beta_hat
        self.degrees_ = d
        self.n_iter_ = report.iterations
        return self

    def expected_degrees(self):
        check_is_fitted(self, "beta_")
        return expected_degrees(self.beta_)

    def edge_probabilities(self):
        check_is_fitted(self, "beta_")
        return edge_prob_matrix(self.beta_)

    def predict_proba(self, pairs):
        """Columns ``[P(no edge), P(edge)]`` for an (m, 2) array of vertex pairs."""
        check_is_fitted(self, "beta_")
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        p = edge_prob(self.beta_[pairs[:, 0]], self.beta_[pairs[:, 1]])
        return np.column_stack([1 - p, p])

    def predict(self, pairs):
        return self.predict_proba(pairs)[:, 1] > 0.5

    def sample(self, random_state=None):
        check_is_fitted(self, "beta_")
        return sample_graph(self.beta_, check_random_state(random_state))

    def score(self, X, y=None):
        """Log-likelihood of a graph (or degree vector) under the fitted parameters."""
        check_is_fitted(self, "beta_")
        return log_likelihood(self.beta_, _degrees_from(X))


class GraphonEstimator(BaseEstimator):
    """Limit graphon W(x, y) = sigmoid(g(x) + g(y)) for an interior degree function.

    ``fit`` takes a :class:`DegreeFunction` or an array of cell values.
    ``transform`` evaluates g, ``predict`` the degree function ∫ W(x, y) dy.
    """

    def __init__(self, n_grid=256, tol=1e-10, max_iter=5000, divergence_bound=50.0, canonicalize=True,
                 eps=1e-9):
        self.n_grid = n_grid
        self.tol = tol
        self.max_iter = max_iter
        self.divergence_bound = divergence_bound
        self.canonicalize = canonicalize
        self.eps = eps

    def fit(self, X, y=None):
        f = X if isinstance(X, DegreeFunction) else DegreeFunction(X)
        cfg = FitConfig(tol=self.tol, max_iter=self.max_iter, divergence_bound=self.divergence_bound)
        fit = fit_graphon(f, self.n_grid, cfg, eps=self.eps)
        if self.canonicalize:
            fit = canonicalize_g(fit, f)
        self.fit_ = fit
        self.g_ = fit.g
        self.residual_ = fit.residual
        return self

    def transform(self, X):
        check_is_fitted(self, "fit_")
        return self.fit_.g_at(np.asarray(X, dtype=float))

    def predict(self, X):
        check_is_fitted(self, "fit_")
        x = np.asarray(X, dtype=float)
        return np.mean(np.asarray(self.fit_.W(x[..., None], (np.arange(self.fit_.M) + 1) / self.fit_.M)), axis=-1)

    def hom_density(self, H, grid=None):
        check_is_fitted(self, "fit_")
        return hom_density_graphon(H, self.fit_, grid=grid)
