from .types import (
    MAX_WEIGHT,
    Assignment,
    Clause,
    HardViolation,
    Literal,
    SolverOutput,
    SolverStatus,
    WcnfInstance,
)
from .wcnf_io import (
    WcnfDialect,
    evaluate,
    format_solution,
    parse_solution_line,
    parse_wcnf,
    read_wcnf,
    save_wcnf,
    write_wcnf,
)

__all__ = [
    "MAX_WEIGHT",
    "Assignment",
    "Clause",
    "HardViolation",
    "Literal",
    "SolverOutput",
    "SolverStatus",
    "WcnfInstance",
    "WcnfDialect",
    "evaluate",
    "format_solution",
    "parse_solution_line",
    "parse_wcnf",
    "read_wcnf",
    "save_wcnf",
    "write_wcnf",
]
