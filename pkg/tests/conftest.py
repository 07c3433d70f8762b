import random
from typing import List, Optional, Tuple

import numpy as np
import pytest

from ilpsat.ilp import IlpModel
from ilpsat.maxsat import Clause, WcnfInstance


def make_random_instance(
    rng: random.Random,
    max_vars: int = 14,
    max_clauses: int = 40,
    max_weight: int = 10,
    weighted: bool = True,
    hard_ratio: float = 0.4,
    max_len: int = 4,
) -> WcnfInstance:
    """Random weighted partial MaxSAT instance; clauses never repeat a variable."""
    num_vars = rng.randint(1, max_vars)
    num_clauses = rng.randint(1, max_clauses)
    hard = []
    soft = []
    for _ in range(num_clauses):
        size = rng.randint(1, min(max_len, num_vars))
        variables = rng.sample(range(1, num_vars + 1), size)
        clause = Clause.of(v if rng.random() < 0.5 else -v for v in variables)
        if rng.random() < hard_ratio:
            hard.append(clause)
        else:
            soft.append((clause, rng.randint(1, max_weight) if weighted else 1))
    return WcnfInstance(num_vars=num_vars, hard=hard, soft=soft)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def small_instance() -> WcnfInstance:
    """hard {x1 v x2}; softs (-x1, 3), (-x2, 2); optimum 2."""
    return WcnfInstance(
        num_vars=2,
        hard=[Clause.of([1, 2])],
        soft=[(Clause.of([-1]), 3), (Clause.of([-2]), 2)],
    )


def ilp_brute_force(model: IlpModel) -> Tuple[Optional[int], Optional[List[int]]]:
    """
    Best objective value of a 0-1 model and the first point attaining it,
    enumerating every point; (None, None) when the model is infeasible.
    """
    n = model.num_vars
    points = (np.arange(2 ** n, dtype=np.int64)[:, None] >> np.arange(n, dtype=np.int64)) & 1
    feasible = np.ones(len(points), dtype=bool)
    for var in model.vars:
        column = points[:, var.index]
        feasible &= (column >= var.lower) & (column <= var.upper)
    for row in model.constraints:
        activity = np.zeros(len(points), dtype=np.int64)
        for coef, var in row.terms:
            activity += coef * points[:, var]
        if row.lhs is not None:
            feasible &= activity >= row.lhs
        if row.rhs is not None:
            feasible &= activity <= row.rhs
    if not feasible.any():
        return None, None
    values = np.full(len(points), model.objective.offset, dtype=np.int64)
    for coef, var in model.objective.terms:
        values += coef * points[:, var]
    values = np.where(feasible, values, np.iinfo(np.int64).min)
    best = int(np.argmax(values))
    return int(values[best]), [int(x) for x in points[best]]
