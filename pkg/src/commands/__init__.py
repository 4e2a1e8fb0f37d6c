"""Command surface: registry, input schemas, output records."""

from .output import render, to_csv, to_json, to_table, write_output
from .records import OutputFormat, OutputRecord, Provenance
from .registry import COMMANDS, get_command, run_command
from .schemas import COMMAND_SCHEMAS, parse_lambdas, validate_command_input

__all__ = [
    "COMMANDS",
    "COMMAND_SCHEMAS",
    "OutputFormat",
    "OutputRecord",
    "Provenance",
    "get_command",
    "parse_lambdas",
    "render",
    "run_command",
    "to_csv",
    "to_json",
    "to_table",
    "validate_command_input",
    "write_output",
]
