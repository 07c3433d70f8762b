"""
Clause-level encodings for the logical constraint classes.

Clauses are lists of DIMACS literals, the same shape pysat uses. Encodings
that need auxiliary variables take a ``fresh`` callable returning a new
variable index on every call.
"""

from enum import Enum
from itertools import combinations
from typing import Callable, List, Sequence

from ilpsat.errors import EmptyConstraintError

ClauseList = List[List[int]]
Fresh = Callable[[], int]


class AmoMethod(Enum):
    PAIRWISE = "pairwise"
    SEQUENTIAL = "sequential"

    @classmethod
    def for_size(cls, n: int, pairwise_max: int = 6) -> "AmoMethod":
        return cls.PAIRWISE if n <= pairwise_max else cls.SEQUENTIAL


def encode_or(literals: Sequence[int]) -> ClauseList:
    if not literals:
        raise EmptyConstraintError("empty disjunction")
    return [list(literals)]


def encode_and(output: int, inputs: Sequence[int]) -> ClauseList:
    """``output <-> AND(inputs)`` as n + 1 clauses."""
    if not inputs:
        raise EmptyConstraintError("product without inputs")
    clauses = [[output] + [-x for x in inputs]]
    clauses.extend([-output, x] for x in inputs)
    return clauses


def sequential_counter(literals: Sequence[int], k: int, fresh: Fresh) -> ClauseList:
    """
    At most ``k`` of ``literals`` are true, with registers ``s[i][j]``
    meaning "at least j + 1 of the first i + 1 literals are true".
    """
    n = len(literals)
    if k >= n:
        return []
    if k <= 0:
        return [[-x] for x in literals]

    s = [[fresh() for _ in range(k)] for _ in range(n - 1)]
    clauses: ClauseList = [[-literals[0], s[0][0]]]
    clauses.extend([-s[0][j]] for j in range(1, k))
    for i in range(1, n - 1):
        x = literals[i]
        clauses.extend([-s[i - 1][j], s[i][j]] for j in range(k))
        clauses.append([-x, s[i][0]])
        clauses.extend([-x, -s[i - 1][j - 1], s[i][j]] for j in range(1, k))
        clauses.append([-x, -s[i - 1][k - 1]])
    clauses.append([-literals[n - 1], -s[n - 2][k - 1]])
    return clauses


def encode_amo(literals: Sequence[int], method: AmoMethod, fresh: Fresh) -> ClauseList:
    if len(literals) <= 1:
        return []
    if method is AmoMethod.PAIRWISE:
        return [[-a, -b] for a, b in combinations(literals, 2)]
    return sequential_counter(literals, 1, fresh)


def encode_partitioning(literals: Sequence[int], method: AmoMethod, fresh: Fresh) -> ClauseList:
    """Exactly one of ``literals``."""
    clauses = encode_amo(literals, method, fresh)
    clauses.extend(encode_or(literals))
    return clauses
