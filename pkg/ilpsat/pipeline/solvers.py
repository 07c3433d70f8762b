"""
Downstream MaxSAT solvers: the builtin branch and bound, pysat's RC2, or an
external executable speaking the MaxSAT Evaluation output format.
"""

import logging
import math
import shlex
import subprocess
import tempfile
from pathlib import Path
from typing import List, Optional

from pysat.examples.rc2 import RC2
from pysat.formula import WCNF

from ilpsat.errors import SolverFailureError, SolverTimeoutError
from ilpsat.maxsat.types import Assignment, SolverOutput, SolverStatus, WcnfInstance
from ilpsat.maxsat.wcnf_io import WcnfDialect, parse_solution_line, save_wcnf
from ilpsat.oracle.solver import branch_and_bound
from ilpsat.pipeline.config import SolverKind, SolverSpec

logger = logging.getLogger(__name__)


def _expand_template(template: str, input_path: Path, time_limit: Optional[float]) -> List[str]:
    args = []
    for token in shlex.split(template):
        if "{timeout}" in token:
            if time_limit is None:
                raise ValueError("command template uses {timeout} but no time limit is set")
            token = token.replace("{timeout}", str(int(math.ceil(time_limit))))
        args.append(token.replace("{input}", str(input_path)))
    return args


def invoke_external_solver(template: str, wcnf_path: Path, time_limit: Optional[float] = None) -> str:
    """
    Run an external solver on `wcnf_path` and return its stdout verbatim.

    Raises SolverTimeoutError once `time_limit` seconds of wall clock pass and
    SolverFailureError when the process cannot start, or exits non-zero
    without printing an ``s`` line.
    """
    if "{input}" not in template:
        raise ValueError("command template must contain an {input} placeholder")
    args = _expand_template(template, Path(wcnf_path), time_limit)
    logger.debug("Running external solver: %s", args)
    try:
        result = subprocess.run(
            args,
            capture_output=True,
            text=True,
            timeout=time_limit,
        )
    except subprocess.TimeoutExpired:
        raise SolverTimeoutError(f"solver exceeded the {time_limit}s limit") from None
    except OSError as exc:
        raise SolverFailureError(f"could not start solver {args[0]!r}: {exc}") from exc

    has_status = any(line.startswith("s ") for line in result.stdout.splitlines())
    if result.returncode != 0 and not has_status:
        stderr = result.stderr.strip().splitlines()
        detail = stderr[-1] if stderr else "no output"
        raise SolverFailureError(f"solver exited with code {result.returncode}: {detail}")
    return result.stdout


def _solve_builtin(instance: WcnfInstance, spec: SolverSpec) -> SolverOutput:
    result = branch_and_bound(instance, budget=spec.node_budget)
    if result.is_unsat:
        return SolverOutput(SolverStatus.UNSATISFIABLE)
    return SolverOutput(SolverStatus.OPTIMUM, result.witness, result.cost)


def _solve_rc2(instance: WcnfInstance) -> SolverOutput:
    if instance.has_empty_hard:
        return SolverOutput(SolverStatus.UNSATISFIABLE)

    wcnf = WCNF()
    for clause in instance.hard:
        wcnf.append(list(clause.literals))
    always_paid = 0
    for clause, weight in instance.soft:
        if clause.is_empty:
            always_paid += weight
        else:
            wcnf.append(list(clause.literals), weight=weight)

    with RC2(wcnf) as rc2:
        model = rc2.compute()
        if model is None:
            return SolverOutput(SolverStatus.UNSATISFIABLE)
        cost = rc2.cost + always_paid + instance.cost_offset
    assignment = Assignment.from_literals(
        (lit for lit in model if abs(lit) <= instance.num_vars), instance.num_vars, cost
    )
    return SolverOutput(SolverStatus.OPTIMUM, assignment, cost)


def _solve_external(instance: WcnfInstance, spec: SolverSpec, dialect: WcnfDialect) -> SolverOutput:
    with tempfile.TemporaryDirectory(prefix="ilpsat-") as tmp:
        path = Path(tmp) / "instance.wcnf"
        save_wcnf(instance, path, dialect)
        text = invoke_external_solver(spec.command, path, spec.time_limit)
    try:
        output = parse_solution_line(text, instance.num_vars)
    except ValueError as exc:
        raise SolverFailureError(f"unparsable solver output: {exc}") from exc
    # external solvers skip the costoffset comment and report bare soft cost
    if output.cost is None:
        return output
    cost = output.cost + instance.cost_offset
    assignment = output.assignment.with_cost(cost) if output.assignment else None
    return SolverOutput(output.status, assignment, cost)


def solve_instance(instance: WcnfInstance, spec: SolverSpec, dialect: WcnfDialect = WcnfDialect.MSE22) -> SolverOutput:
    """Solve `instance` with the solver `spec` names; costs include the cost offset."""
    if spec.kind is SolverKind.BUILTIN:
        return _solve_builtin(instance, spec)
    if spec.kind is SolverKind.RC2:
        return _solve_rc2(instance)
    return _solve_external(instance, spec, dialect)
