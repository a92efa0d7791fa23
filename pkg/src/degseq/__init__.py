"""Degree sequences, the β-model and graph limits of graphs with given degrees."""
from .beta_model import (
    BetaVector,
    edge_prob,
    edge_prob_matrix,
    expected_degrees,
    log_likelihood,
    log_partition,
    sample_graph,
)
from .degree_sequences import (
    BipartiteMargins,
    DegreeFunction,
    DegreeSequence,
    EgReport,
    claim_margins_feasible,
    continuum_eg,
    degree_variate_check,
    discretize_limit,
    eg_slacks,
    erdos_gallai_check,
    gale_ryser_check,
    is_interior,
    min_eg_functional,
    realize_havel_hakimi,
)
from .estimators import BetaModel, GraphonEstimator
from .exceptions import (
    BudgetExceededError,
    DegseqError,
    FitDivergedError,
    InfeasibleDegreesError,
    NotInteriorError,
    ParseError,
    UnsupportedMotifError,
)
from .graph_limits import (
    GraphonFit,
    MotifGraph,
    canonicalize_g,
    fit_graphon,
    hom_density_graph,
    hom_density_graphon,
    predicted_vs_empirical,
    psi,
    psi_inverse,
)
from .graphs import SimpleGraph
from .mle_solver import (
    FitConfig,
    FitReport,
    FitStatus,
    contraction_theta,
    fit_mle,
    jacobian_phi,
    phi,
    posterior_mode,
)

__version__ = "0.1.0"

__all__ = [
    "BetaModel",
    "BetaVector",
    "BipartiteMargins",
    "BudgetExceededError",
    "DegreeFunction",
    "DegreeSequence",
    "DegseqError",
    "EgReport",
    "FitConfig",
    "FitDivergedError",
    "FitReport",
    "FitStatus",
    "GraphonEstimator",
    "GraphonFit",
    "InfeasibleDegreesError",
    "MotifGraph",
    "NotInteriorError",
    "ParseError",
    "SimpleGraph",
    "UnsupportedMotifError",
    "canonicalize_g",
    "claim_margins_feasible",
    "continuum_eg",
    "contraction_theta",
    "degree_variate_check",
    "discretize_limit",
    "edge_prob",
    "edge_prob_matrix",
    "eg_slacks",
    "erdos_gallai_check",
    "expected_degrees",
    "fit_graphon",
    "fit_mle",
    "gale_ryser_check",
    "hom_density_graph",
    "hom_density_graphon",
    "is_interior",
    "jacobian_phi",
    "log_likelihood",
    "log_partition",
    "min_eg_functional",
    "phi",
    "posterior_mode",
    "predicted_vs_empirical",
    "psi",
    "psi_inverse",
    "realize_havel_hakimi",
    "sample_graph",
]
