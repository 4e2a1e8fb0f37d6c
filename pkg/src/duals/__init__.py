"""Dual certificates: explicit feasible dual solutions and their verification."""

from src.duals.exponential import (
    ExponentialDual,
    exponential_branch_gap,
    tail_bound,
    verify_exponential_dual,
)
from src.duals.identities import appendix_c_identity, simplex_moments, uniform_dual_objective_exact
from src.duals.schemas import (
    BranchGap,
    DualFamily,
    FeasibilityReport,
    IdentityCheck,
    ObjectiveMethod,
    SimplexMoments,
)
from src.duals.uniform import (
    TrivialUniformDual,
    UniformDual,
    UniformDualBase,
    trivial_uniform_dual,
    uniform_dual_derivative_map,
    verify_uniform_dual,
)

__all__ = [
    "UniformDualBase",
    "UniformDual",
    "TrivialUniformDual",
    "trivial_uniform_dual",
    "verify_uniform_dual",
    "uniform_dual_derivative_map",
    "ExponentialDual",
    "verify_exponential_dual",
    "exponential_branch_gap",
    "tail_bound",
    "appendix_c_identity",
    "uniform_dual_objective_exact",
    "simplex_moments",
    "FeasibilityReport",
    "BranchGap",
    "IdentityCheck",
    "SimplexMoments",
    "DualFamily",
    "ObjectiveMethod",
]
