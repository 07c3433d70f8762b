"""
Activity-based bound propagation over 0-1 rows.

For a row ``lhs <= sum(a_i * y_i) <= rhs`` with current bounds, the minimum
and maximum activities decide infeasibility and force single variables:

* ``min_act + |a_j| > rhs``: y_j takes the value that contributes least,
* ``max_act - |a_j| < lhs``: y_j takes the value that contributes most.
"""

from collections import deque
from dataclasses import replace
from typing import Deque, Dict, Iterable, List, Optional, Sequence, Tuple

from ilpsat.errors import InfeasibleError
from ilpsat.ilp.types import IlpModel, LinConstraint


def activity_bounds(row: LinConstraint, lower: Sequence[int], upper: Sequence[int]) -> Tuple[int, int]:
    min_act = 0
    max_act = 0
    for coef, var in row.terms:
        if coef > 0:
            min_act += coef * lower[var]
            max_act += coef * upper[var]
        else:
            min_act += coef * upper[var]
            max_act += coef * lower[var]
    return min_act, max_act


class Propagator:
    """
    Worklist propagator holding its own copy of the bounds.

    Rows are only read; `copy` gives an independent propagator over the same
    rows, which is what probing branches run on.
    """

    def __init__(self, rows: Sequence[LinConstraint], lower: Sequence[int], upper: Sequence[int]):
        self.rows = rows
        self.lower = list(lower)
        self.upper = list(upper)
        self.rows_of: Dict[int, List[int]] = {}
        for r, row in enumerate(rows):
            for _, var in row.terms:
                self.rows_of.setdefault(var, []).append(r)

    @classmethod
    def for_model(cls, model: IlpModel) -> "Propagator":
        return cls(model.constraints, [v.lower for v in model.vars], [v.upper for v in model.vars])

    def copy(self) -> "Propagator":
        clone = Propagator.__new__(Propagator)
        clone.rows = self.rows
        clone.lower = list(self.lower)
        clone.upper = list(self.upper)
        clone.rows_of = self.rows_of
        return clone

    def is_fixed(self, var: int) -> bool:
        return self.lower[var] == self.upper[var]

    def _fix(self, var: int, value: int, fixed: List[Tuple[int, int]], queue: Deque[int], queued: List[bool]) -> None:
        if self.lower[var] == self.upper[var]:
            if self.lower[var] != value:
                raise InfeasibleError(f"variable {var} forced to both 0 and 1")
            return
        self.lower[var] = self.upper[var] = value
        fixed.append((var, value))
        for r in self.rows_of.get(var, ()):
            if not queued[r]:
                queued[r] = True
                queue.append(r)

    def propagate(self, assume: Iterable[Tuple[int, int]] = (), rows: Optional[Iterable[int]] = None) -> List[Tuple[int, int]]:
        """
        Fix ``assume`` and propagate to fixpoint.

        Returns the fixings made (assumptions included) in the order they were
        derived; raises InfeasibleError on a conflict.
        """
        queue: Deque[int] = deque()
        queued = [False] * len(self.rows)
        fixed: List[Tuple[int, int]] = []

        for r in (range(len(self.rows)) if rows is None else rows):
            if not queued[r]:
                queued[r] = True
                queue.append(r)
        for var, value in assume:
            self._fix(var, value, fixed, queue, queued)

        while queue:
            r = queue.popleft()
            queued[r] = False
            row = self.rows[r]
            min_act, max_act = activity_bounds(row, self.lower, self.upper)
            if row.rhs is not None and min_act > row.rhs:
                raise InfeasibleError(f"row {r}: minimum activity {min_act} exceeds rhs {row.rhs}")
            if row.lhs is not None and max_act < row.lhs:
                raise InfeasibleError(f"row {r}: maximum activity {max_act} below lhs {row.lhs}")

            for coef, var in row.terms:
                if self.lower[var] == self.upper[var]:
                    continue
                mag = abs(coef)
                if row.rhs is not None and min_act + mag > row.rhs:
                    self._fix(var, 0 if coef > 0 else 1, fixed, queue, queued)
                    min_act, max_act = activity_bounds(row, self.lower, self.upper)
                elif row.lhs is not None and max_act - mag < row.lhs:
                    self._fix(var, 1 if coef > 0 else 0, fixed, queue, queued)
                    min_act, max_act = activity_bounds(row, self.lower, self.upper)
        return fixed


def propagate_bounds(model: IlpModel) -> Tuple[IlpModel, List[Tuple[int, int]]]:
    """
    Propagate every row to fixpoint.

    Returns the model with tightened variable bounds and the new fixings in
    ascending variable order.
    """
    prop = Propagator.for_model(model)
    fixings = sorted(prop.propagate())
    if not fixings:
        return model, []
    vars_ = list(model.vars)
    for var, value in fixings:
        vars_[var] = vars_[var].with_bounds(value, value)
    return replace(model, vars=vars_), fixings
