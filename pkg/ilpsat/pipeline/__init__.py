from .config import GateMode, PipelineConfig, SizeGuard, SolverKind, SolverSpec
from .stats import GateDecision, InstanceGroup, RunStats, aggregate_stats, compute_stats, format_table, is_smaller
from .solvers import invoke_external_solver, solve_instance
from .runner import (
    PipelineResult,
    PreprocessResult,
    choose_instance,
    preprocess,
    preprocess_stats,
    run_instance,
    run_pipeline,
    write_outputs,
)
from .batch import discover_instances, run_batch

__all__ = [
    "GateMode",
    "PipelineConfig",
    "SizeGuard",
    "SolverKind",
    "SolverSpec",
    "GateDecision",
    "InstanceGroup",
    "RunStats",
    "aggregate_stats",
    "compute_stats",
    "format_table",
    "is_smaller",
    "invoke_external_solver",
    "solve_instance",
    "PipelineResult",
    "PreprocessResult",
    "choose_instance",
    "preprocess",
    "preprocess_stats",
    "run_instance",
    "run_pipeline",
    "write_outputs",
    "discover_instances",
    "run_batch",
]
