"""Plan-then-execute acceptance pipeline package."""

from .check_groups import CHECK_DEFINITIONS, CheckCost, CheckDefinition, CheckGroup, checks_for_criteria
from .graph import build_accept_graph, get_accept_graph, initial_state, run_acceptance
from .schemas import CheckResult, Plan, PlanStep
from .state import AcceptState

__all__ = [
    "AcceptState",
    "Plan",
    "PlanStep",
    "CheckResult",
    "CHECK_DEFINITIONS",
    "CheckDefinition",
    "CheckGroup",
    "CheckCost",
    "checks_for_criteria",
    "build_accept_graph",
    "get_accept_graph",
    "initial_state",
    "run_acceptance",
]
