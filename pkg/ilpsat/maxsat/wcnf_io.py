"""
Reading and writing WCNF instances and MaxSAT solver output.

Two dialects are supported:

* legacy: ``p wcnf <nv> <nc> [<top>]`` header, every clause is
  ``<weight> <lits> 0`` and a weight of at least ``top`` marks a hard clause.
  Without ``top`` every clause is soft.
* mse22: headerless, hard clauses start with ``h``.

Both dialects carry the instance cost offset in a ``c costoffset <n>``
comment; the headerless writer also records ``c numvars <n>`` when the
variable count is not implied by the clauses.
"""

import logging
import re
from enum import Enum
from pathlib import Path
from typing import List, Optional, Tuple, Union

from ilpsat.errors import (
    LengthMismatchError,
    MalformedLineError,
    NoSolutionLineError,
    SolutionFormatError,
    WeightError,
    WeightOverflowError,
)
from ilpsat.maxsat.types import (
    MAX_WEIGHT,
    Assignment,
    Clause,
    HardViolation,
    SolverOutput,
    SolverStatus,
    WcnfInstance,
)

logger = logging.getLogger(__name__)

_BINARY_TOKEN = re.compile(r"^[01]+$")

_STATUS_BY_TEXT = {
    "OPTIMUM FOUND": SolverStatus.OPTIMUM,
    "OPTIMUM": SolverStatus.OPTIMUM,
    "SATISFIABLE": SolverStatus.SATISFIABLE,
    "UNSATISFIABLE": SolverStatus.UNSATISFIABLE,
    "UNKNOWN": SolverStatus.UNKNOWN,
}


class WcnfDialect(Enum):
    LEGACY = "legacy"
    MSE22 = "mse22"

    @classmethod
    def from_name(cls, name: str) -> "WcnfDialect":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown WCNF dialect '{name}' (expected legacy or mse22)") from None


# ----------------------------------------------------------------------
# Parsing
# ----------------------------------------------------------------------

def _to_int(token: str, line_no: int, line: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise MalformedLineError(line_no, line, f"non-integer token '{token}'") from None


def _parse_literals(tokens: List[str], line_no: int, line: str) -> Clause:
    if not tokens or tokens[-1] != "0":
        raise MalformedLineError(line_no, line, "clause is not terminated by 0")
    lits = [_to_int(tok, line_no, line) for tok in tokens[:-1]]
    if any(lit == 0 for lit in lits):
        raise MalformedLineError(line_no, line, "literal 0 before end of clause")
    return Clause.of(lits)


def _parse_weight(token: str, line_no: int, line: str) -> int:
    weight = _to_int(token, line_no, line)
    if weight <= 0:
        raise WeightError(f"line {line_no}: soft clause weight must be positive, got {weight}")
    if weight > MAX_WEIGHT:
        raise WeightOverflowError(f"line {line_no}: weight {weight} exceeds {MAX_WEIGHT}")
    return weight


def _parse_comment(body: str, line_no: int, line: str) -> Tuple[Optional[str], Optional[int]]:
    parts = body.split()
    if len(parts) == 2 and parts[0] in ("costoffset", "numvars"):
        value = _to_int(parts[1], line_no, line)
        if value < 0:
            raise MalformedLineError(line_no, line, f"negative {parts[0]}")
        return parts[0], value
    return None, None


def parse_wcnf(text: Union[bytes, str]) -> WcnfInstance:
    """
    Parse a WCNF instance in either dialect.

    The dialect is decided by the presence of a ``p`` line; without one the
    input is read as mse22.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")

    hard: List[Clause] = []
    soft: List[Tuple[Clause, int]] = []
    header_vars: Optional[int] = None
    top: Optional[int] = None
    legacy = False
    cost_offset = 0
    numvars_comment = 0

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue

        if line.startswith("c"):
            key, value = _parse_comment(line[1:], line_no, raw)
            if key == "costoffset":
                cost_offset = value
            elif key == "numvars":
                numvars_comment = value
            continue

        tokens = line.split()

        if tokens[0] == "p":
            if legacy or hard or soft:
                raise MalformedLineError(line_no, raw, "unexpected problem line")
            if len(tokens) not in (4, 5) or tokens[1] != "wcnf":
                raise MalformedLineError(line_no, raw, "expected 'p wcnf <nv> <nc> [<top>]'")
            header_vars = _to_int(tokens[2], line_no, raw)
            _to_int(tokens[3], line_no, raw)
            if len(tokens) == 5:
                top = _to_int(tokens[4], line_no, raw)
                if top <= 0:
                    raise WeightError(f"line {line_no}: top must be positive, got {top}")
                if top > MAX_WEIGHT:
                    raise WeightOverflowError(f"line {line_no}: top {top} exceeds {MAX_WEIGHT}")
            legacy = True
            continue

        if legacy:
            weight = _to_int(tokens[0], line_no, raw)
            clause = _parse_literals(tokens[1:], line_no, raw)
            if top is not None and weight >= top:
                hard.append(clause)
            else:
                soft.append((clause, _parse_weight(tokens[0], line_no, raw)))
        elif tokens[0] == "h":
            hard.append(_parse_literals(tokens[1:], line_no, raw))
        else:
            weight = _parse_weight(tokens[0], line_no, raw)
            soft.append((_parse_literals(tokens[1:], line_no, raw), weight))

    instance = WcnfInstance(hard=hard, soft=soft, cost_offset=cost_offset)
    max_var = instance.max_variable()
    if header_vars is not None:
        if max_var > header_vars:
            raise MalformedLineError(0, "", f"variable {max_var} exceeds header count {header_vars}")
        instance.num_vars = header_vars
    else:
        instance.num_vars = max(max_var, numvars_comment)

    logger.debug(
        "Parsed %s WCNF: %d vars, %d hard, %d soft",
        "legacy" if legacy else "mse22", instance.num_vars, len(hard), len(soft),
    )
    return instance


def read_wcnf(path: Union[str, Path]) -> WcnfInstance:
    return parse_wcnf(Path(path).read_bytes())


# ----------------------------------------------------------------------
# Writing
# ----------------------------------------------------------------------

def _clause_body(clause: Clause) -> str:
    if clause.is_empty:
        return "0"
    return " ".join(str(lit) for lit in clause.literals) + " 0"


def write_wcnf(instance: WcnfInstance, dialect: WcnfDialect = WcnfDialect.MSE22) -> str:
    """Serialize hard clauses first, then soft clauses, each in stored order."""
    lines = [f"c costoffset {instance.cost_offset}"]

    if dialect is WcnfDialect.LEGACY:
        top = instance.soft_weight_total() + 1
        lines.append(f"p wcnf {instance.num_vars} {instance.num_clauses} {top}")
        lines.extend(f"{top} {_clause_body(c)}" for c in instance.hard)
    else:
        if instance.num_vars > instance.max_variable():
            lines.append(f"c numvars {instance.num_vars}")
        lines.extend(f"h {_clause_body(c)}" for c in instance.hard)

    lines.extend(f"{w} {_clause_body(c)}" for c, w in instance.soft)
    return "\n".join(lines) + "\n"


def save_wcnf(instance: WcnfInstance, path: Union[str, Path], dialect: WcnfDialect = WcnfDialect.MSE22) -> None:
    Path(path).write_text(write_wcnf(instance, dialect), encoding="utf-8")


# ----------------------------------------------------------------------
# Solver output
# ----------------------------------------------------------------------

def parse_solution_line(text: Union[bytes, str], num_vars: Optional[int] = None) -> SolverOutput:
    """
    Read the ``s``/``o``/``v`` lines of a MaxSAT solver run.

    ``v`` lines are concatenated. The value line is read as a binary string
    when it is a single run of 0/1 characters that cannot be a literal list
    (longer than one character, or exactly one expected variable); otherwise
    as DIMACS literals. The last ``o`` line wins.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")

    status: Optional[SolverStatus] = None
    cost: Optional[int] = None
    value_tokens: List[str] = []
    value_lines: List[List[str]] = []

    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "s":
            status = _STATUS_BY_TEXT.get(rest.upper(), SolverStatus.UNKNOWN)
        elif head == "o":
            try:
                cost = int(rest.split()[0])
            except (ValueError, IndexError):
                raise SolutionFormatError(f"malformed cost line: {line!r}") from None
        elif head == "v":
            tokens = rest.split()
            value_lines.append(tokens)
            value_tokens.extend(tokens)

    if status is SolverStatus.UNSATISFIABLE:
        return SolverOutput(SolverStatus.UNSATISFIABLE)

    if not value_lines:
        if status is SolverStatus.UNKNOWN:
            return SolverOutput(SolverStatus.UNKNOWN, cost=cost)
        raise NoSolutionLineError("solver output contains no 'v' line")

    binary = all(len(toks) == 1 and _BINARY_TOKEN.match(toks[0]) for toks in value_lines)
    if binary:
        bits = "".join(value_tokens)
        binary = len(bits) > 1 or num_vars == 1

    if binary:
        expected = len(bits) if num_vars is None else num_vars
        if len(bits) < expected:
            raise LengthMismatchError(expected, len(bits))
        values = tuple(ch == "1" for ch in bits[:expected])
        assignment = Assignment(values, cost)
    else:
        try:
            lits = [int(tok) for tok in value_tokens]
        except ValueError:
            raise SolutionFormatError(f"malformed value line: {' '.join(value_tokens)!r}") from None
        lits = [lit for lit in lits if lit != 0]
        size = num_vars if num_vars is not None else max((abs(l) for l in lits), default=0)
        assignment = Assignment.from_literals(
            (lit for lit in lits if abs(lit) <= size), size, cost
        )

    return SolverOutput(status or SolverStatus.SATISFIABLE, assignment, cost)


def format_solution(status: SolverStatus, assignment: Optional[Assignment] = None, cost: Optional[int] = None) -> str:
    """Render MSE-style ``s``/``o``/``v`` lines; the value line is a binary string."""
    lines = [f"s {status.value}"]
    if status in (SolverStatus.OPTIMUM, SolverStatus.SATISFIABLE) and assignment is not None:
        if cost is not None:
            lines.append(f"o {cost}")
        lines.append(f"v {assignment.to_binary_string()}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# Evaluation
# ----------------------------------------------------------------------

def evaluate(instance: WcnfInstance, assignment: Assignment) -> Union[int, HardViolation]:
    """
    Cost of ``assignment``, or the indices of the hard clauses it falsifies.

    Raises WeightOverflowError when the soft weights sum past 2**63 - 1.
    """
    if assignment.num_vars < instance.num_vars:
        raise LengthMismatchError(instance.num_vars, assignment.num_vars)
    instance.soft_weight_total()

    values = assignment.values
    violated = tuple(i for i, c in enumerate(instance.hard) if not c.satisfied_by(values))
    if violated:
        return HardViolation(violated)

    return instance.cost_offset + sum(w for c, w in instance.soft if not c.satisfied_by(values))
