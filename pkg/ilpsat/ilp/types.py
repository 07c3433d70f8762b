from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

Term = Tuple[int, int]  # (coefficient, variable index)


class VarKind(Enum):
    DECISION = "decision"
    INDICATOR = "indicator"
    AUXILIARY = "auxiliary"


class ConstraintClass(Enum):
    LOGICAL_OR = "logicor"
    SOFT_LINK = "softlink"
    SETPPC_PACKING = "setppc_packing"
    SETPPC_PARTITIONING = "setppc_partitioning"
    LOGICAL_AND = "logicand"
    GENERAL_LINEAR = "linear"
    # placeholder for rows coming from outside the pipeline that have no CNF encoding
    UNSUPPORTED = "unsupported"


@dataclass(frozen=True)
class IlpVar:
    """
    A 0-1 variable.

    `origin` is the 1-based WCNF variable for decision variables and the
    0-based soft clause index for indicators.
    """
    index: int
    kind: VarKind = VarKind.DECISION
    origin: Optional[int] = None
    lower: int = 0
    upper: int = 1

    def __post_init__(self):
        if not (0 <= self.lower <= self.upper <= 1):
            raise ValueError(f"invalid bounds [{self.lower}, {self.upper}] for variable {self.index}")

    @property
    def is_fixed(self) -> bool:
        return self.lower == self.upper

    def with_bounds(self, lower: int, upper: int) -> "IlpVar":
        return replace(self, lower=lower, upper=upper)

    def name(self) -> str:
        if self.kind is VarKind.DECISION and self.origin is not None:
            return f"y{self.origin}"
        if self.kind is VarKind.INDICATOR and self.origin is not None:
            return f"z{self.origin}"
        return f"a{self.index}"


def normalize_terms(terms: Iterable[Term]) -> Tuple[Term, ...]:
    """Merge repeated variables, drop zero coefficients, sort by variable."""
    merged: Dict[int, int] = {}
    for coef, var in terms:
        merged[var] = merged.get(var, 0) + coef
    return tuple((c, v) for v, c in sorted(merged.items()) if c != 0)


@dataclass(frozen=True)
class LinConstraint:
    """``lhs <= sum(coef * var) <= rhs``; a missing side is None (infinite)."""
    terms: Tuple[Term, ...]
    lhs: Optional[int] = None
    rhs: Optional[int] = None
    cclass: ConstraintClass = ConstraintClass.GENERAL_LINEAR

    def __post_init__(self):
        if self.lhs is None and self.rhs is None:
            raise ValueError("constraint needs at least one finite side")
        if self.lhs is not None and self.rhs is not None and self.lhs > self.rhs:
            raise ValueError(f"lhs {self.lhs} > rhs {self.rhs}")

    @classmethod
    def build(
        cls,
        terms: Iterable[Term],
        lhs: Optional[int] = None,
        rhs: Optional[int] = None,
        cclass: ConstraintClass = ConstraintClass.GENERAL_LINEAR,
    ) -> "LinConstraint":
        return cls(normalize_terms(terms), lhs, rhs, cclass)

    @property
    def variables(self) -> Tuple[int, ...]:
        return tuple(v for _, v in self.terms)

    @property
    def is_equality(self) -> bool:
        return self.lhs is not None and self.lhs == self.rhs

    def with_class(self, cclass: ConstraintClass) -> "LinConstraint":
        return replace(self, cclass=cclass)

    def activity(self, values: Sequence[int]) -> int:
        return sum(c * values[v] for c, v in self.terms)

    def satisfied_by(self, values: Sequence[int]) -> bool:
        act = self.activity(values)
        if self.lhs is not None and act < self.lhs:
            return False
        if self.rhs is not None and act > self.rhs:
            return False
        return True

    def negated(self) -> "LinConstraint":
        """Same row multiplied by -1."""
        return LinConstraint(
            tuple((-c, v) for c, v in self.terms),
            None if self.rhs is None else -self.rhs,
            None if self.lhs is None else -self.lhs,
            self.cclass,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "terms": [list(t) for t in self.terms],
            "lhs": self.lhs,
            "rhs": self.rhs,
            "class": self.cclass.value,
        }


@dataclass
class Objective:
    """Maximize ``offset + sum(coef * var)``."""
    terms: Tuple[Term, ...] = ()
    offset: int = 0

    def coefficient_of(self, var: int) -> int:
        for c, v in self.terms:
            if v == var:
                return c
        return 0

    def value(self, values: Sequence[int]) -> int:
        return self.offset + sum(c * values[v] for c, v in self.terms)

    def positive_total(self) -> int:
        return sum(c for c, _ in self.terms if c > 0)


@dataclass
class IlpModel:
    vars: List[IlpVar] = field(default_factory=list)
    constraints: List[LinConstraint] = field(default_factory=list)
    objective: Objective = field(default_factory=Objective)
    soft_weight_total: int = 0
    # cost offset already carried by the source instance
    base_cost_offset: int = 0
    dropped_tautologies: int = 0

    @property
    def num_vars(self) -> int:
        return len(self.vars)

    def decision_vars(self) -> List[IlpVar]:
        return [v for v in self.vars if v.kind is VarKind.DECISION]

    def is_feasible(self, values: Sequence[int]) -> bool:
        for var in self.vars:
            if not (var.lower <= values[var.index] <= var.upper):
                return False
        return all(c.satisfied_by(values) for c in self.constraints)

    def summary(self) -> Dict[str, Any]:
        counts: Dict[str, int] = {}
        for c in self.constraints:
            counts[c.cclass.value] = counts.get(c.cclass.value, 0) + 1
        return {
            "vars": self.num_vars,
            "constraints": len(self.constraints),
            "objective_terms": len(self.objective.terms),
            "classes": counts,
        }
