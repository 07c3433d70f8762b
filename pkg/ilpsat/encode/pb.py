"""
CNF encodings of pseudo-Boolean constraints ``lhs <= sum(w_i * l_i) <= rhs``.

Both sides are reduced to at-most constraints with positive weights:

    sum(w_i * l_i) >= L   <=>   sum(w_i * -l_i) <= W - L

and each at-most constraint is encoded by the first method that applies:

* trivial cases: units for literals heavier than the bound, a single
  clause when only "all true" is too heavy,
* equal weights: sequential counter over ``k // w`` literals,
* a BDD of the constraint if it stays under the node limit,
* a binary adder network followed by a comparator otherwise.
"""

import logging
from enum import Enum
from typing import Dict, List, Optional, Sequence, Set, Tuple

from ilpsat.encode.clauses import ClauseList, Fresh, sequential_counter
from ilpsat.errors import TriviallyFalseError

logger = logging.getLogger(__name__)

WeightedLits = List[Tuple[int, int]]  # (positive weight, DIMACS literal)


class PbMethod(Enum):
    CARDINALITY = "cardinality"
    BDD = "bdd"
    ADDER = "adder"


class BddLimitExceeded(Exception):
    """Internal signal: the BDD grew past the node limit."""


def normalize_pb(terms: Sequence[Tuple[int, int]]) -> Tuple[WeightedLits, int]:
    """
    Rewrite ``sum(c * lit)`` as ``constant + sum(w * lit')`` with w > 0 and at
    most one literal per variable. Returns the weighted literals (sorted by
    descending weight, then variable) and the constant.
    """
    per_var: Dict[int, int] = {}
    constant = 0
    for coef, lit in terms:
        var = abs(lit)
        if lit > 0:
            per_var[var] = per_var.get(var, 0) + coef
        else:
            # c * -x = c - c * x
            constant += coef
            per_var[var] = per_var.get(var, 0) - coef
    weighted: WeightedLits = []
    for var, coef in per_var.items():
        if coef > 0:
            weighted.append((coef, var))
        elif coef < 0:
            constant += coef
            weighted.append((-coef, -var))
    weighted.sort(key=lambda t: (-t[0], abs(t[1])))
    return weighted, constant


# ----------------------------------------------------------------------
# BDD
# ----------------------------------------------------------------------

def _bdd_at_most(weighted: WeightedLits, k: int, fresh: Fresh, node_limit: int) -> ClauseList:
    n = len(weighted)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + weighted[i][0]

    # node (i, k): "sum of terms i.. is at most k"; True when k >= suffix[i], False when k < 0
    levels: List[List[int]] = []
    frontier: Set[int] = {k}
    count = 0
    for i in range(n):
        level = sorted(frontier)
        levels.append(level)
        count += len(level)
        if count > node_limit:
            raise BddLimitExceeded()
        nxt: Set[int] = set()
        for budget in level:
            for child in (budget - weighted[i][0], budget):
                if 0 <= child < suffix[i + 1]:
                    nxt.add(child)
        frontier = nxt

    node_var: Dict[Tuple[int, int], int] = {}
    for i, level in enumerate(levels):
        for budget in level:
            node_var[(i, budget)] = fresh()

    clauses: ClauseList = [[node_var[(0, k)]]]
    for i, level in enumerate(levels):
        weight, lit = weighted[i]
        for budget in level:
            v = node_var[(i, budget)]
            high = budget - weight
            if high < 0:
                clauses.append([-v, -lit])
            elif high < suffix[i + 1]:
                clauses.append([-v, -lit, node_var[(i + 1, high)]])
            # the low child keeps the budget, so it is never False
            if budget < suffix[i + 1]:
                clauses.append([-v, node_var[(i + 1, budget)]])
    return clauses


# ----------------------------------------------------------------------
# Adder network
# ----------------------------------------------------------------------

def _half_adder(a: int, b: int, fresh: Fresh, clauses: ClauseList) -> Tuple[int, int]:
    s, c = fresh(), fresh()
    clauses.extend([[-a, -b, -s], [a, b, -s], [a, -b, s], [-a, b, s]])
    clauses.extend([[-a, -b, c], [a, -c], [b, -c]])
    return s, c


def _full_adder(a: int, b: int, cin: int, fresh: Fresh, clauses: ClauseList) -> Tuple[int, int]:
    s, c = fresh(), fresh()
    clauses.extend([
        [a, b, cin, -s], [a, -b, -cin, -s], [-a, b, -cin, -s], [-a, -b, cin, -s],
        [-a, -b, -cin, s], [-a, b, cin, s], [a, -b, cin, s], [a, b, -cin, s],
    ])
    clauses.extend([
        [-a, -b, c], [-a, -cin, c], [-b, -cin, c],
        [a, b, -c], [a, cin, -c], [b, cin, -c],
    ])
    return s, c


def _adder_at_most(weighted: WeightedLits, k: int, fresh: Fresh) -> ClauseList:
    clauses: ClauseList = []
    buckets: List[List[int]] = []
    for weight, lit in weighted:
        bit = 0
        while weight:
            if weight & 1:
                while len(buckets) <= bit:
                    buckets.append([])
                buckets[bit].append(lit)
            weight >>= 1
            bit += 1

    sum_bits: List[Optional[int]] = []
    bit = 0
    while bit < len(buckets):
        queue = buckets[bit]
        while len(queue) >= 2:
            if len(queue) >= 3:
                s, c = _full_adder(queue.pop(0), queue.pop(0), queue.pop(0), fresh, clauses)
            else:
                s, c = _half_adder(queue.pop(0), queue.pop(0), fresh, clauses)
            queue.append(s)
            if len(buckets) <= bit + 1:
                buckets.append([])
            buckets[bit + 1].append(c)
        sum_bits.append(queue[0] if queue else None)
        bit += 1

    # forbid sum > k: at the highest position where sum and k differ, sum has 1 and k has 0
    width = max(len(sum_bits), k.bit_length())
    sum_bits.extend([None] * (width - len(sum_bits)))
    k_bits = [(k >> b) & 1 for b in range(width)]
    for b in range(width):
        if k_bits[b] or sum_bits[b] is None:
            continue
        clause = [-sum_bits[b]]
        for higher in range(b + 1, width):
            s = sum_bits[higher]
            if s is None:
                if k_bits[higher]:
                    # sum is below k at this position
                    clause = None
                    break
                continue
            clause.append(-s if k_bits[higher] else s)
        if clause is not None:
            clauses.append(clause)
    return clauses


# ----------------------------------------------------------------------
# Entry points
# ----------------------------------------------------------------------

def encode_at_most(
    weighted: WeightedLits,
    k: int,
    fresh: Fresh,
    bdd_node_limit: int = 100_000,
    method: Optional[PbMethod] = None,
) -> Tuple[ClauseList, Optional[PbMethod]]:
    """
    Encode ``sum(w * lit) <= k`` for positive weights.

    `method` forces one encoding and skips the trivial shortcuts. Returns the
    clauses and the method used (None for the shortcuts).
    """
    total = sum(w for w, _ in weighted)
    if k < 0:
        raise TriviallyFalseError(f"at-most bound {k} is negative")
    if k >= total:
        return [], None

    if method is None:
        units = [[-lit] for w, lit in weighted if w > k]
        rest = [(w, lit) for w, lit in weighted if w <= k]
        rest_total = sum(w for w, _ in rest)
        if k >= rest_total:
            return units, None
        if rest_total - min(w for w, _ in rest) <= k:
            return units + [[-lit for _, lit in rest]], None
        weights = {w for w, _ in rest}
        if len(weights) == 1:
            w = weights.pop()
            return units + sequential_counter([lit for _, lit in rest], k // w, fresh), PbMethod.CARDINALITY
        try:
            return units + _bdd_at_most(rest, k, fresh, bdd_node_limit), PbMethod.BDD
        except BddLimitExceeded:
            logger.debug("BDD over %d literals exceeds %d nodes, using adder network", len(rest), bdd_node_limit)
            return units + _adder_at_most(rest, k, fresh), PbMethod.ADDER

    if method is PbMethod.CARDINALITY:
        weights = {w for w, _ in weighted}
        if len(weights) != 1:
            raise ValueError("cardinality encoding needs equal weights")
        return sequential_counter([lit for _, lit in weighted], k // weights.pop(), fresh), method
    if method is PbMethod.BDD:
        return _bdd_at_most(weighted, k, fresh, bdd_node_limit), method
    return _adder_at_most(weighted, k, fresh), method


def encode_pb(
    terms: Sequence[Tuple[int, int]],
    lhs: Optional[int],
    rhs: Optional[int],
    fresh: Fresh,
    bdd_node_limit: int = 100_000,
    method: Optional[PbMethod] = None,
) -> ClauseList:
    """
    Encode ``lhs <= sum(c * lit) <= rhs`` over DIMACS literals; a None side
    is unbounded. The two sides are encoded independently.

    Raises TriviallyFalseError when no 0-1 point satisfies a side.
    """
    if lhs is None and rhs is None:
        raise ValueError("constraint needs at least one finite side")
    weighted, constant = normalize_pb(terms)
    total = sum(w for w, _ in weighted)
    clauses: ClauseList = []
    if rhs is not None:
        upper = rhs - constant
        if upper < 0:
            raise TriviallyFalseError(f"minimum activity {constant} exceeds rhs {rhs}")
        clauses.extend(encode_at_most(weighted, upper, fresh, bdd_node_limit, method)[0])
    if lhs is not None:
        lower = lhs - constant
        if lower > total:
            raise TriviallyFalseError(f"maximum activity {constant + total} is below lhs {lhs}")
        flipped = [(w, -lit) for w, lit in weighted]
        clauses.extend(encode_at_most(flipped, total - lower, fresh, bdd_node_limit, method)[0])
    return clauses
