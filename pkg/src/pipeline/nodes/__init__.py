"""Acceptance pipeline node implementations."""

from .planner import planner_node
from .executor import executor_node
from .report import report_node
from .error_handler import error_handler_node

__all__ = [
    "planner_node",
    "executor_node",
    "report_node",
    "error_handler_node",
]
