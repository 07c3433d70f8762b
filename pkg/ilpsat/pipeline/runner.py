"""
The three-stage pipeline.

1. preprocess: build the 0-1 ILP, presolve it and encode the result back
   into a WCNF instance plus a reconstruction record;
2. solve the simplified instance when the gate selects it, the original
   one otherwise;
3. lift the witness to the original instance and verify it.
"""

import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ilpsat.encode.model import EncodedModel, encode_model
from ilpsat.errors import (
    EmptyConstraintError,
    EmptyHardClauseError,
    InfeasibleError,
    TriviallyFalseError,
    VerificationFailureError,
)
from ilpsat.ilp.bridge import build_ilp
from ilpsat.maxsat.types import Assignment, SolverStatus, WcnfInstance
from ilpsat.maxsat.wcnf_io import format_solution, read_wcnf, save_wcnf
from ilpsat.observability import record_presolve_report, traced_stage
from ilpsat.pipeline.config import GateMode, PipelineConfig
from ilpsat.pipeline.solvers import solve_instance
from ilpsat.pipeline.stats import GateDecision, RunStats, compute_stats, is_smaller
from ilpsat.presolve.engine import presolve
from ilpsat.presolve.types import SimplifiedModel
from ilpsat.reconstruct.lifting import Verdict, verify_lifted, verify_optimal
from ilpsat.reconstruct.record import ReconstructionRecord

logger = logging.getLogger(__name__)

_build = traced_stage("build_ilp")(build_ilp)
_presolve = traced_stage("presolve")(presolve)
_encode = traced_stage("encode_model")(encode_model)
_solve = traced_stage("solve")(solve_instance)
_verify_lifted = traced_stage("reconstruct")(verify_lifted)
_verify = traced_stage("verify")(verify_optimal)

_EXIT_CODES = {
    SolverStatus.OPTIMUM: 0,
    SolverStatus.SATISFIABLE: 10,
    SolverStatus.UNSATISFIABLE: 20,
    SolverStatus.UNKNOWN: 1,
}


@dataclass
class PreprocessResult:
    origin: WcnfInstance
    simp: Optional[SimplifiedModel] = None
    encoded: Optional[EncodedModel] = None
    record: Optional[ReconstructionRecord] = None
    skipped: bool = False
    # set when preprocessing proved the instance has no feasible assignment
    infeasible: Optional[str] = None
    seconds: float = 0.0

    @property
    def simp_instance(self) -> Optional[WcnfInstance]:
        return self.encoded.instance if self.encoded is not None else None


@dataclass
class PipelineResult:
    status: SolverStatus
    stats: RunStats
    preprocessing: PreprocessResult
    assignment: Optional[Assignment] = None
    cost: Optional[int] = None
    verdict: Optional[Verdict] = None

    @property
    def exit_code(self) -> int:
        return _EXIT_CODES[self.status]

    def solution_text(self) -> str:
        return format_solution(self.status, self.assignment, self.cost)


def preprocess(origin: WcnfInstance, config: PipelineConfig) -> PreprocessResult:
    """
    Stage 1. Never raises on infeasibility; the result carries the reason
    instead. Raises WeightOverflowError when the soft weights sum past the
    WCNF weight range.
    """
    origin.soft_weight_total()
    result = PreprocessResult(origin)
    if not config.size_guard.admits(origin.num_vars, origin.num_clauses):
        logger.info(
            "Skipping preprocessing: %d vars / %d clauses exceed the size guard",
            origin.num_vars,
            origin.num_clauses,
        )
        result.skipped = True
        return result

    started = time.perf_counter()
    try:
        model = _build(origin)
        result.simp = _presolve(model, config.presolve)
        record_presolve_report(result.simp.report)
        result.encoded = _encode(result.simp, config.encode)
        result.record = ReconstructionRecord.from_encoding(result.simp, result.encoded, origin.num_vars)
    except (EmptyHardClauseError, InfeasibleError, TriviallyFalseError, EmptyConstraintError) as exc:
        logger.info("Preprocessing proved infeasibility: %s", exc)
        result.infeasible = str(exc)
    result.seconds = time.perf_counter() - started
    return result


def choose_instance(pre: PreprocessResult, gate: GateMode) -> GateDecision:
    if pre.skipped:
        return GateDecision.PREPROCESS_SKIPPED
    simp = pre.simp_instance
    if gate is GateMode.ALWAYS:
        return GateDecision.USED_SIMPLIFIED
    if gate is GateMode.PAPER and is_smaller(pre.origin, simp):
        return GateDecision.USED_SIMPLIFIED
    return GateDecision.USED_ORIGINAL


def preprocess_stats(pre: PreprocessResult, timings: dict) -> RunStats:
    report = pre.simp.report if pre.simp is not None else None
    return compute_stats(pre.origin, pre.simp_instance, report, timings)


def run_instance(origin: WcnfInstance, config: PipelineConfig, name: Optional[str] = None) -> PipelineResult:
    """
    Run all three stages on an in-memory instance.

    Raises VerificationFailureError when the lifted witness is infeasible, its
    cost differs from the solver's claim or, on small instances, it is not
    optimal. An unverified solution is never returned.
    """
    pre = preprocess(origin, config)
    timings = {"preprocess": pre.seconds}

    if pre.infeasible is not None:
        stats = preprocess_stats(pre, timings)
        stats.instance = name
        stats.status = SolverStatus.UNSATISFIABLE.value
        return PipelineResult(SolverStatus.UNSATISFIABLE, stats, pre)

    decision = choose_instance(pre, config.gate)
    used_simp = decision is GateDecision.USED_SIMPLIFIED
    target = pre.simp_instance if used_simp else origin
    logger.debug("Gate decision %s; solving %s", decision.value, target.summary())

    started = time.perf_counter()
    output = _solve(target, config.solver, config.dialect)
    timings["solve"] = time.perf_counter() - started

    stats = preprocess_stats(pre, timings)
    stats.instance = name
    stats.gate_decision = decision
    stats.status = output.status.value

    if output.is_unsat or output.assignment is None:
        status = SolverStatus.UNSATISFIABLE if output.is_unsat else SolverStatus.UNKNOWN
        return PipelineResult(status, stats, pre)

    # optimality is only claimed, and therefore only checked, for OPTIMUM answers
    oracle_limit = config.oracle_var_limit if output.status is SolverStatus.OPTIMUM else -1
    if used_simp:
        origin_sol, verdict = _verify_lifted(origin, output.assignment, pre.record, output.cost, oracle_limit)
    else:
        origin_sol = Assignment(output.assignment.values[: origin.num_vars])
        verdict = _verify(origin, origin_sol, output.cost, oracle_limit)
    if not verdict.passed:
        raise VerificationFailureError(verdict)

    stats.final_cost = verdict.cost
    stats.verified = True
    return PipelineResult(output.status, stats, pre, origin_sol.with_cost(verdict.cost), verdict.cost, verdict)


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    """Run the pipeline on `config.input_path` and write the configured output files."""
    if config.input_path is None:
        raise ValueError("PipelineConfig.input_path is not set")
    origin = read_wcnf(config.input_path)
    result = run_instance(origin, config, name=Path(config.input_path).name)
    write_outputs(result.preprocessing, result.stats, config)
    return result


def write_outputs(pre: PreprocessResult, stats: Optional[RunStats], config: PipelineConfig) -> None:
    if pre.encoded is not None:
        if config.simp_out is not None:
            save_wcnf(pre.encoded.instance, config.simp_out, config.dialect)
        if config.map_out is not None:
            pre.record.save(config.map_out)
    if stats is not None and config.stats_out is not None:
        Path(config.stats_out).write_text(stats.to_json(config.record_timings) + "\n", encoding="utf-8")
