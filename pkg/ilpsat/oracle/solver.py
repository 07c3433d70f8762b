"""
Exact reference MaxSAT solvers.

`brute_force` enumerates every assignment with numpy and is the ground
truth for tests; `branch_and_bound` is a small DPLL search with unit
propagation on hard clauses and the weight of already falsified soft
clauses as lower bound.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from ilpsat.errors import BudgetExceededError, TooLargeError
from ilpsat.maxsat.types import Assignment, WcnfInstance

logger = logging.getLogger(__name__)

BRUTE_FORCE_MAX_VARS = 26
_CHUNK_BITS = 16


class OracleStatus(Enum):
    OPTIMUM = "optimum"
    UNSAT = "unsat"


@dataclass(frozen=True)
class OracleResult:
    status: OracleStatus
    cost: Optional[int] = None
    witness: Optional[Assignment] = None
    nodes: int = 0

    @property
    def is_unsat(self) -> bool:
        return self.status is OracleStatus.UNSAT


def _satisfied(clause, bits: np.ndarray, chunk: int) -> np.ndarray:
    sat = np.zeros(chunk, dtype=bool)
    for lit in clause:
        column = bits[abs(lit) - 1]
        sat |= column if lit > 0 else ~column
    return sat


def brute_force(instance: WcnfInstance) -> OracleResult:
    """
    Minimum cost over all assignments, with the lexicographically smallest
    minimizer (x1 most significant) as witness.
    """
    n = instance.num_vars
    if n > BRUTE_FORCE_MAX_VARS:
        raise TooLargeError(f"{n} variables exceed the brute-force cap of {BRUTE_FORCE_MAX_VARS}")
    # per-point costs are summed in int64; raises WeightOverflowError past that range
    instance.soft_weight_total()

    total = 1 << n
    chunk_size = min(total, 1 << _CHUNK_BITS)
    shifts = np.array([n - 1 - j for j in range(n)], dtype=np.uint64).reshape(-1, 1)
    weights = [w for _, w in instance.soft]

    best_cost: Optional[int] = None
    best_index = -1
    for start in range(0, total, chunk_size):
        size = min(chunk_size, total - start)
        index = np.arange(start, start + size, dtype=np.uint64)
        bits = ((index.reshape(1, -1) >> shifts) & np.uint64(1)).astype(bool)

        feasible = np.ones(size, dtype=bool)
        for clause in instance.hard:
            feasible &= _satisfied(clause, bits, size)
            if not feasible.any():
                break
        if not feasible.any():
            continue

        cost = np.zeros(size, dtype=np.int64)
        for (clause, _), weight in zip(instance.soft, weights):
            cost += np.where(_satisfied(clause, bits, size), 0, weight).astype(np.int64)
        cost = np.where(feasible, cost, np.iinfo(np.int64).max)
        pos = int(np.argmin(cost))
        if feasible[pos] and (best_cost is None or int(cost[pos]) < best_cost):
            best_cost = int(cost[pos])
            best_index = start + pos

    if best_cost is None:
        return OracleResult(OracleStatus.UNSAT)
    values = tuple(bool((best_index >> (n - 1 - j)) & 1) for j in range(n))
    final = best_cost + instance.cost_offset
    return OracleResult(OracleStatus.OPTIMUM, final, Assignment(values, final))


class _Search:
    def __init__(self, instance: WcnfInstance):
        self.n = instance.num_vars
        self.hard: List[Tuple[int, ...]] = [c.literals for c in instance.hard]
        self.soft: List[Tuple[Tuple[int, ...], int]] = [(c.literals, w) for c, w in instance.soft]
        self.value: List[Optional[bool]] = [None] * (self.n + 1)
        self.hard_occ: Dict[int, List[int]] = {}
        self.soft_occ: Dict[int, List[int]] = {}
        for i, lits in enumerate(self.hard):
            for lit in set(abs(l) for l in lits):
                self.hard_occ.setdefault(lit, []).append(i)
        for i, (lits, _) in enumerate(self.soft):
            for lit in set(abs(l) for l in lits):
                self.soft_occ.setdefault(lit, []).append(i)
        self.falsified = [False] * len(self.soft)
        self.trail: List[int] = []
        self.soft_trail: List[Tuple[int, int]] = []  # (trail length when falsified, soft index)
        self.lower = 0
        for i, (lits, w) in enumerate(self.soft):
            if not lits:
                self.falsified[i] = True
                self.lower += w

    def lit_value(self, lit: int) -> Optional[bool]:
        v = self.value[abs(lit)]
        if v is None:
            return None
        return v if lit > 0 else not v

    def assign(self, lit: int) -> None:
        self.value[abs(lit)] = lit > 0
        self.trail.append(abs(lit))
        for i in self.soft_occ.get(abs(lit), ()):
            if not self.falsified[i] and all(self.lit_value(l) is False for l in self.soft[i][0]):
                self.falsified[i] = True
                self.lower += self.soft[i][1]
                self.soft_trail.append((len(self.trail), i))

    def undo(self, length: int) -> None:
        while self.soft_trail and self.soft_trail[-1][0] > length:
            _, i = self.soft_trail.pop()
            self.falsified[i] = False
            self.lower -= self.soft[i][1]
        while len(self.trail) > length:
            self.value[self.trail.pop()] = None

    def propagate(self, pending: List[int]) -> bool:
        """Unit propagation on hard clauses touching ``pending`` variables; False on conflict."""
        while pending:
            var = pending.pop()
            for i in self.hard_occ.get(var, ()):
                unassigned = None
                count = 0
                satisfied = False
                for lit in self.hard[i]:
                    val = self.lit_value(lit)
                    if val is True:
                        satisfied = True
                        break
                    if val is None:
                        count += 1
                        unassigned = lit
                if satisfied:
                    continue
                if count == 0:
                    return False
                if count == 1:
                    self.assign(unassigned)
                    pending.append(abs(unassigned))
        return True

    def initial_units(self) -> Optional[List[int]]:
        pending: List[int] = []
        for lits in self.hard:
            if not lits:
                return None
            if len(lits) == 1:
                val = self.lit_value(lits[0])
                if val is False:
                    return None
                if val is None:
                    self.assign(lits[0])
                    pending.append(abs(lits[0]))
        return pending


def branch_and_bound(instance: WcnfInstance, budget: int = 10_000_000) -> OracleResult:
    """
    Depth-first search over variables in index order, false branch first.

    Raises BudgetExceededError once more than `budget` decisions were made
    without completing the search.
    """
    instance.soft_weight_total()
    search = _Search(instance)
    pending = search.initial_units()
    if pending is None or not search.propagate(pending):
        return OracleResult(OracleStatus.UNSAT)

    best: Optional[int] = None
    witness: Optional[Tuple[bool, ...]] = None
    nodes = 0
    # decision frames: [variable, trail length before the decision, second branch tried]
    frames: List[List[int]] = []
    consistent = True

    while True:
        if consistent and (best is None or search.lower < best):
            var = next((v for v in range(1, search.n + 1) if search.value[v] is None), None)
            if var is None:
                best = search.lower
                witness = tuple(bool(v) for v in search.value[1:])
            else:
                nodes += 1
                if nodes > budget:
                    raise BudgetExceededError(nodes - 1)
                frames.append([var, len(search.trail), 0])
                search.assign(-var)
                consistent = search.propagate([var])
                continue

        # backtrack
        while frames and frames[-1][2]:
            frames.pop()
        if not frames:
            break
        frame = frames[-1]
        frame[2] = 1
        search.undo(frame[1])
        search.assign(frame[0])
        consistent = search.propagate([frame[0]])

    if best is None:
        return OracleResult(OracleStatus.UNSAT, nodes=nodes)
    final = best + instance.cost_offset
    logger.debug("Branch and bound finished: cost %d after %d nodes", final, nodes)
    return OracleResult(OracleStatus.OPTIMUM, final, Assignment(witness, final), nodes)
