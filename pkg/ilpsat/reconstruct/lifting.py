import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from ilpsat.errors import LengthMismatchError, RangeError
from ilpsat.maxsat.types import Assignment, HardViolation, WcnfInstance
from ilpsat.maxsat.wcnf_io import evaluate
from ilpsat.oracle.solver import brute_force
from ilpsat.presolve.types import Free, MultiAggregated, SimpleAggregated
from ilpsat.reconstruct.record import ReconstructionRecord

logger = logging.getLogger(__name__)


def reconstruct(simp_sol: Assignment, rec: ReconstructionRecord) -> Assignment:
    """
    Lift an assignment of the simplified instance to the original instance.

    Free variables without a literal take False. Raises RangeError when a
    multi-aggregation evaluates outside {0, 1}.
    """
    if simp_sol.num_vars < rec.simp_num_vars:
        raise LengthMismatchError(rec.simp_num_vars, simp_sol.num_vars)

    free_values: Dict[int, int] = {}
    dispositions = rec.var_map.dispositions
    for var, lit in rec.literal_of.items():
        disp = dispositions[var]
        value = int(simp_sol.literal_value(lit))
        if isinstance(disp, Free):
            free_values[var] = value
        elif isinstance(disp, SimpleAggregated):
            free_values.setdefault(disp.target, 1 - value if disp.negated else value)

    values = rec.var_map.lift(free_values)
    for var, disp in enumerate(dispositions):
        if isinstance(disp, MultiAggregated) and values[var] not in (0, 1):
            raise RangeError(f"variable {var} evaluates to {values[var]}")

    out = [False] * rec.origin_num_vars
    for var, origin in rec.decision_origin.items():
        out[origin - 1] = bool(values[var])
    return Assignment(tuple(out))


class VerdictStatus(Enum):
    PASS = "PASS"
    FAIL = "FAIL"


class FailureReason(Enum):
    HARD_VIOLATION = "HardViolation"
    COST_MISMATCH = "CostMismatch"
    NOT_OPTIMAL = "NotOptimal"
    OUT_OF_RANGE = "OutOfRange"


@dataclass(frozen=True)
class Verdict:
    status: VerdictStatus
    reasons: Tuple[FailureReason, ...] = ()
    cost: Optional[int] = None
    claimed_cost: Optional[int] = None
    oracle_cost: Optional[int] = None
    violated: Tuple[int, ...] = ()

    @property
    def passed(self) -> bool:
        return self.status is VerdictStatus.PASS

    @property
    def oracle_checked(self) -> bool:
        return self.oracle_cost is not None

    def summary(self) -> str:
        if self.passed:
            checked = ", oracle-optimal" if self.oracle_checked else ""
            return f"PASS (cost {self.cost}{checked})"
        parts: List[str] = []
        for reason in self.reasons:
            if reason is FailureReason.HARD_VIOLATION:
                parts.append(f"{reason.value} on hard clauses {list(self.violated[:10])}")
            elif reason is FailureReason.OUT_OF_RANGE:
                parts.append(f"{reason.value}: the simplified solution leaves an aggregated variable outside {{0, 1}}")
            elif reason is FailureReason.COST_MISMATCH:
                parts.append(f"{reason.value}: evaluated {self.cost}, claimed {self.claimed_cost}")
            else:
                parts.append(f"{reason.value}: oracle optimum {self.oracle_cost}")
        return "FAIL(" + "; ".join(parts) + ")"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "reasons": [r.value for r in self.reasons],
            "cost": self.cost,
            "claimedCost": self.claimed_cost,
            "oracleCost": self.oracle_cost,
        }


def verify_optimal(
    origin: WcnfInstance,
    origin_sol: Assignment,
    claimed_cost: Optional[int],
    oracle_var_limit: int = 20,
) -> Verdict:
    """
    Check hard feasibility, the claimed cost and, for instances with at most
    `oracle_var_limit` variables, optimality against brute force.
    """
    reasons: List[FailureReason] = []
    result = evaluate(origin, origin_sol)
    if isinstance(result, HardViolation):
        return Verdict(VerdictStatus.FAIL, (FailureReason.HARD_VIOLATION,), claimed_cost=claimed_cost, violated=result.indices)

    if claimed_cost is not None and result != claimed_cost:
        reasons.append(FailureReason.COST_MISMATCH)

    oracle_cost = None
    if origin.num_vars <= oracle_var_limit:
        oracle = brute_force(origin)
        oracle_cost = oracle.cost
        # a feasible witness exists, so the oracle found an optimum
        if oracle_cost is not None and result != oracle_cost:
            reasons.append(FailureReason.NOT_OPTIMAL)

    status = VerdictStatus.FAIL if reasons else VerdictStatus.PASS
    verdict = Verdict(status, tuple(reasons), result, claimed_cost, oracle_cost)
    logger.debug("Verification: %s", verdict.summary())
    return verdict


def verify_lifted(
    origin: WcnfInstance,
    simp_sol: Assignment,
    rec: ReconstructionRecord,
    claimed_cost: Optional[int],
    oracle_var_limit: int = 20,
) -> Tuple[Optional[Assignment], Verdict]:
    """
    Reconstruct then verify. A simplified solution that breaks a
    multi-aggregation range fails with OutOfRange instead of raising.
    """
    try:
        origin_sol = reconstruct(simp_sol, rec)
    except RangeError as exc:
        logger.warning("Lifting failed: %s", exc)
        return None, Verdict(VerdictStatus.FAIL, (FailureReason.OUT_OF_RANGE,), claimed_cost=claimed_cost)
    return origin_sol, verify_optimal(origin, origin_sol, claimed_cost, oracle_var_limit)
