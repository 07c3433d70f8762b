"""
Command line entry point.

    ilpsat preprocess in.wcnf [--out simp.wcnf] [--map rec.json]
    ilpsat solve in.wcnf [--solver builtin|rc2] [--solver-cmd "..."] [--gate paper|always|never]
    ilpsat verify in.wcnf --solution sol.txt [--map rec.json]
    ilpsat stats DIR [--json out.jsonl] [--workers N]

Exit codes: 0 optimum verified, 10 satisfiable but not proven optimal,
20 unsatisfiable, 1 error, 3 verification failure.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from ilpsat.encode.model import EncodeConfig
from ilpsat.errors import IlpSatError, VerificationFailureError
from ilpsat.maxsat.types import SolverStatus
from ilpsat.maxsat.wcnf_io import WcnfDialect, parse_solution_line, read_wcnf
from ilpsat.observability import get_telemetry
from ilpsat.pipeline.batch import discover_instances, run_batch
from ilpsat.pipeline.config import GateMode, PipelineConfig, SizeGuard, SolverKind, SolverSpec
from ilpsat.pipeline.runner import choose_instance, preprocess, run_pipeline, preprocess_stats, write_outputs
from ilpsat.pipeline.stats import aggregate_stats, format_table
from ilpsat.presolve.types import PresolveConfig
from ilpsat.reconstruct.lifting import verify_lifted, verify_optimal
from ilpsat.reconstruct.record import ReconstructionRecord

logger = logging.getLogger("ilpsat.cli")

EXIT_OK = 0
EXIT_SATISFIABLE = 10
EXIT_UNSAT = 20
EXIT_ERROR = 1
EXIT_VERIFICATION = 3


def _add_logging(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--log-level", default="WARNING", help="Python logging level (stderr).")


def _add_common(parser: argparse.ArgumentParser) -> None:
    _add_logging(parser)
    parser.add_argument("--dialect", choices=[d.value for d in WcnfDialect], default=WcnfDialect.MSE22.value,
                        help="Dialect of written WCNF files.")
    parser.add_argument("--no-timings", action="store_true", help="Omit wall-clock fields from stats.")


def _add_presolve(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rounds", type=int, default=None, help="Maximum presolve rounds.")
    parser.add_argument("--probe-limit", type=int, default=None, help="Total probing budget.")
    parser.add_argument("--no-multi-aggr", action="store_true", help="Disable multi-aggregation.")
    parser.add_argument("--bdd-limit", type=int, default=None, help="BDD node limit for PB encodings.")
    parser.add_argument("--size-guard", type=SizeGuard.parse, default=None, metavar="V,C",
                        help="Skip preprocessing above V variables or C clauses.")


def _add_solver(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--solver", choices=["builtin", "rc2"], default="builtin")
    parser.add_argument("--solver-cmd", default=None,
                        help="External solver command template with {input} and optional {timeout}.")
    parser.add_argument("--gate", choices=[g.value for g in GateMode] + ["smaller"], default=None)
    parser.add_argument("--time-limit", type=float, default=None, help="External solver wall-clock limit (s).")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ilpsat", description="ILP presolve for weighted partial MaxSAT.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="Simplify an instance and write the simplified WCNF.")
    p.add_argument("input", type=Path)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--map", type=Path, default=None, help="Reconstruction record (JSON).")
    p.add_argument("--json", type=Path, default=None, help="Stats JSON output.")
    _add_common(p)
    _add_presolve(p)

    s = sub.add_parser("solve", help="Preprocess, solve and verify an instance.")
    s.add_argument("input", type=Path)
    s.add_argument("--out", type=Path, default=None)
    s.add_argument("--map", type=Path, default=None)
    s.add_argument("--json", type=Path, default=None)
    _add_common(s)
    _add_presolve(s)
    _add_solver(s)

    v = sub.add_parser("verify", help="Check a solution of an instance.")
    v.add_argument("input", type=Path)
    v.add_argument("--solution", type=Path, required=True)
    v.add_argument("--map", type=Path, default=None,
                   help="Reconstruction record: the solution refers to the simplified instance.")
    v.add_argument("--oracle-limit", type=int, default=20,
                   help="Also check optimality by brute force up to this many variables.")
    _add_logging(v)

    st = sub.add_parser("stats", help="Run the pipeline over a directory and report mean statistics.")
    st.add_argument("directory", type=Path)
    st.add_argument("--json", type=Path, default=None, help="Per-instance JSON lines output.")
    st.add_argument("--workers", type=int, default=1)
    _add_common(st)
    _add_presolve(st)
    _add_solver(st)
    return parser


def config_from_args(args: argparse.Namespace) -> PipelineConfig:
    presolve = PresolveConfig()
    if getattr(args, "rounds", None) is not None:
        presolve.max_rounds = args.rounds
    if getattr(args, "probe_limit", None) is not None:
        presolve.probe_limit = args.probe_limit
    if getattr(args, "no_multi_aggr", False):
        presolve.multi_aggregation = False

    encode = EncodeConfig()
    if getattr(args, "bdd_limit", None) is not None:
        encode.bdd_node_limit = args.bdd_limit

    config = PipelineConfig(
        input_path=getattr(args, "input", None),
        dialect=WcnfDialect.from_name(args.dialect),
        presolve=presolve,
        encode=encode,
        record_timings=not args.no_timings,
        simp_out=getattr(args, "out", None),
        map_out=getattr(args, "map", None),
        stats_out=getattr(args, "json", None),
    )
    if getattr(args, "size_guard", None) is not None:
        config.size_guard = args.size_guard
    if getattr(args, "gate", None):
        config.gate = GateMode.from_name(args.gate)
    if getattr(args, "solver_cmd", None):
        config.solver = SolverSpec.external(args.solver_cmd, args.time_limit)
    elif getattr(args, "solver", None):
        config.solver = SolverSpec(kind=SolverKind(args.solver), time_limit=args.time_limit)
    return config


def _cmd_preprocess(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    origin = read_wcnf(config.input_path)
    pre = preprocess(origin, config)
    stats = preprocess_stats(pre, {"preprocess": pre.seconds})
    stats.instance = config.input_path.name
    if pre.infeasible is None:
        stats.gate_decision = choose_instance(pre, config.gate)
    else:
        stats.status = SolverStatus.UNSATISFIABLE.value
    write_outputs(pre, stats, config)
    print(stats.to_json(config.record_timings))
    return EXIT_UNSAT if pre.infeasible is not None else EXIT_OK


def _cmd_solve(args: argparse.Namespace) -> int:
    result = run_pipeline(config_from_args(args))
    sys.stdout.write(result.solution_text())
    return result.exit_code


def _cmd_verify(args: argparse.Namespace) -> int:
    origin = read_wcnf(args.input)
    text = args.solution.read_text(encoding="utf-8")

    if args.map is not None:
        record = ReconstructionRecord.load(args.map)
        output = parse_solution_line(text, record.simp_num_vars)
        offset = record.cost_offset
    else:
        record = None
        output = parse_solution_line(text, origin.num_vars)
        offset = origin.cost_offset

    if output.is_unsat:
        print("s UNSATISFIABLE (nothing to verify)")
        return EXIT_UNSAT
    if output.assignment is None:
        print("s UNKNOWN (nothing to verify)")
        return EXIT_ERROR

    claimed = output.cost + offset if output.cost is not None else None
    limit = args.oracle_limit if output.status is SolverStatus.OPTIMUM else -1
    if record is not None:
        _, verdict = verify_lifted(origin, output.assignment, record, claimed, limit)
    else:
        verdict = verify_optimal(origin, output.assignment, claimed, limit)
    print(json.dumps(verdict.to_dict(), sort_keys=True))
    if not verdict.passed:
        logger.error("Verification failed: %s", verdict.summary())
        return EXIT_VERIFICATION
    return EXIT_OK


def _cmd_stats(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    paths = discover_instances(args.directory)
    if not paths:
        logger.error("No .wcnf files under %s", args.directory)
        return EXIT_ERROR

    if args.json is not None:
        with args.json.open("w", encoding="utf-8") as sink:
            rows = run_batch(paths, config, workers=args.workers, sink=sink)
    else:
        rows = run_batch(paths, config, workers=args.workers)
    sys.stdout.write(format_table(aggregate_stats(r for r in rows if "error" not in r)))
    failed = sum(1 for r in rows if "error" in r)
    if failed:
        logger.warning("%d of %d instances failed", failed, len(rows))
    return EXIT_ERROR if failed else EXIT_OK


_COMMANDS = {
    "preprocess": _cmd_preprocess,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "stats": _cmd_stats,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level.upper(),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return _COMMANDS[args.command](args)
    except VerificationFailureError as exc:
        logger.error("%s", exc)
        return EXIT_VERIFICATION
    except (IlpSatError, OSError, ValueError) as exc:
        logger.error("%s", exc)
        return EXIT_ERROR
    finally:
        try:
            get_telemetry().shutdown()
        except Exception:
            logger.debug("Telemetry shutdown failed", exc_info=True)


if __name__ == "__main__":
    sys.exit(main())
