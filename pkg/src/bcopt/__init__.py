"""Budget-constrained matching and matroid-intersection optimization.

Selects a maximum-profit feasible set under a hard budget, where feasibility
is either a graph matching or a two-matroid intersection.  The solver prunes
the search to a small representative set of high-profit elements, enumerates
its feasible subsets, and extends each with a low-profit patching subroutine;
an exact brute-force oracle and exhaustive checkers back every guarantee on
desk-scale instances.
"""

from .core import (
    BCError,
    BCInstance,
    CapExceededError,
    Element,
    Epsilon,
    GuardExceededError,
    InfeasibleSetError,
    InvalidParameterError,
    Solution,
    UnknownElementError,
    ValidationReport,
    is_solution,
    preprocess_discard,
    validate_instance,
)
from .constraints import Matching, MatroidIntersection
from .matroids import (
    GraphicMatroid,
    MatroidOracle,
    PartitionMatroid,
    RestrictedTruncatedMatroid,
    UniformMatroid,
    min_cost_basis,
    weak_exchange_extend,
)
from .classes import ClassLayout, class_index, class_partition, q_of, small_profit_pool
from .exchange import Chain, ExchangeSet, exset_matching, exset_matroid_intersection
from .lagrange import LagrangeConfig, approx_opt, non_profitable_solver
from .repset import RepresentativeSet, rep_set
from .solver import ResidualInstance, SolveConfig, eptas, residual_instance, solve
from .oracle import brute_force_opt, profitable_set

__all__ = [
    "BCError",
    "BCInstance",
    "CapExceededError",
    "Chain",
    "ClassLayout",
    "Element",
    "Epsilon",
    "ExchangeSet",
    "GraphicMatroid",
    "GuardExceededError",
    "InfeasibleSetError",
    "InvalidParameterError",
    "LagrangeConfig",
    "Matching",
    "MatroidIntersection",
    "MatroidOracle",
    "PartitionMatroid",
    "RepresentativeSet",
    "ResidualInstance",
    "RestrictedTruncatedMatroid",
    "SolveConfig",
    "Solution",
    "UniformMatroid",
    "UnknownElementError",
    "ValidationReport",
    "approx_opt",
    "brute_force_opt",
    "class_index",
    "class_partition",
    "eptas",
    "exset_matching",
    "exset_matroid_intersection",
    "is_solution",
    "min_cost_basis",
    "non_profitable_solver",
    "preprocess_discard",
    "profitable_set",
    "q_of",
    "rep_set",
    "residual_instance",
    "small_profit_pool",
    "solve",
    "validate_instance",
    "weak_exchange_extend",
]
