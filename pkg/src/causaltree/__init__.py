"""Causal dependence tree approximations for networks of Gaussian processes."""

from .errors import (
    CausalTreeError,
    IndexOutOfRange,
    KindMismatch,
    NotPositiveDefinite,
    NotStrictlyCausal,
    NotSymmetric,
    NumericalInconsistency,
    TooLarge,
    ValidationError,
)
from .info import (
    WeightMatrix,
    build_weights,
    gaussian_di,
    gaussian_kl,
    gaussian_mi,
    tree_to_gaussian,
)
from .linalg import cholesky, log_det, submatrix
from .model import (
    CovarianceMatrix,
    GenerativeModel,
    ProcessLayout,
    build_covariance,
    sample,
    validate,
)
from .roc import RocCurve, llr, loglik, roc_curve, run_experiment
from .trees import (
    ProcessTree,
    best_causal_tree,
    count_dependencies,
    edmonds_max_arborescence,
    enumerate_causal_trees,
    enumerate_spanning_trees,
    kruskal_max_tree,
)

__version__ = "0.1.0"
