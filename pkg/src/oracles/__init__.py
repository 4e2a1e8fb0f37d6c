"""Brute-force LP oracle on discretized priors."""

from src.oracles.lp import (
    LPCheck,
    LPInstance,
    LPSolution,
    build_lp,
    check_lp_solution,
    solve_lp,
    solve_many,
)
from src.oracles.simplex import SimplexResult, SimplexStatus, revised_simplex

__all__ = [
    "LPInstance",
    "LPSolution",
    "LPCheck",
    "build_lp",
    "solve_lp",
    "solve_many",
    "check_lp_solution",
    "SimplexStatus",
    "SimplexResult",
    "revised_simplex",
]
