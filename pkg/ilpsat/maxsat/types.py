from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from ilpsat.errors import WeightOverflowError

# On-disk contract for a single weight; the legacy `top` must fit as well.
MAX_WEIGHT = 2 ** 63 - 1


@dataclass(frozen=True)
class Literal:
    """A WCNF literal: a 1-based variable with a polarity."""
    variable: int
    positive: bool = True

    def __post_init__(self):
        if self.variable < 1:
            raise ValueError(f"literal variable must be >= 1, got {self.variable}")

    def __neg__(self) -> "Literal":
        return Literal(self.variable, not self.positive)

    def to_dimacs(self) -> int:
        return self.variable if self.positive else -self.variable

    @classmethod
    def from_dimacs(cls, lit: int) -> "Literal":
        if lit == 0:
            raise ValueError("0 is not a literal")
        return cls(abs(lit), lit > 0)


@dataclass(frozen=True)
class Clause:
    """
    Disjunction of DIMACS literals.

    Literals keep their input order; duplicates are removed on construction
    through `Clause.of`. An empty clause is a legal value and marks an
    unsatisfiable hard constraint.
    """
    literals: Tuple[int, ...] = ()

    @classmethod
    def of(cls, literals: Iterable[int]) -> "Clause":
        seen = set()
        out = []
        for lit in literals:
            if lit == 0:
                raise ValueError("0 is not a literal")
            if lit not in seen:
                seen.add(lit)
                out.append(lit)
        return cls(tuple(out))

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    @property
    def is_empty(self) -> bool:
        return not self.literals

    @property
    def is_tautology(self) -> bool:
        lits = set(self.literals)
        return any(-lit in lits for lit in lits)

    @property
    def max_variable(self) -> int:
        return max((abs(lit) for lit in self.literals), default=0)

    def satisfied_by(self, values: Sequence[bool]) -> bool:
        """`values[i]` is the value of variable i+1."""
        for lit in self.literals:
            if values[abs(lit) - 1] == (lit > 0):
                return True
        return False


@dataclass
class WcnfInstance:
    """Weighted partial MaxSAT formula."""
    num_vars: int = 0
    hard: List[Clause] = field(default_factory=list)
    soft: List[Tuple[Clause, int]] = field(default_factory=list)
    cost_offset: int = 0

    @property
    def num_clauses(self) -> int:
        return len(self.hard) + len(self.soft)

    @property
    def has_empty_hard(self) -> bool:
        return any(c.is_empty for c in self.hard)

    def soft_weight_total(self) -> int:
        total = sum(w for _, w in self.soft)
        # the legacy writer needs top = total + 1 within the on-disk contract
        if total >= MAX_WEIGHT:
            raise WeightOverflowError(f"soft weight sum {total} does not fit the WCNF weight range")
        return total

    def max_variable(self) -> int:
        clauses = list(self.hard) + [c for c, _ in self.soft]
        return max((c.max_variable for c in clauses), default=0)

    def clause_multiset(self) -> Tuple[Tuple[Tuple[int, ...], ...], Tuple[Tuple[Tuple[int, ...], int], ...]]:
        """Order-insensitive view used for semantic equality checks."""
        hard = tuple(sorted(c.literals for c in self.hard))
        soft = tuple(sorted((c.literals, w) for c, w in self.soft))
        return hard, soft

    def semantically_equal(self, other: "WcnfInstance") -> bool:
        return (
            self.num_vars == other.num_vars
            and self.cost_offset == other.cost_offset
            and self.clause_multiset() == other.clause_multiset()
        )

    def summary(self) -> Dict[str, Any]:
        return {
            "vars": self.num_vars,
            "hard": len(self.hard),
            "soft": len(self.soft),
            "cost_offset": self.cost_offset,
        }


@dataclass(frozen=True)
class Assignment:
    """Total truth assignment over variables 1..num_vars."""
    values: Tuple[bool, ...]
    cost: Optional[int] = None

    @classmethod
    def from_literals(cls, literals: Iterable[int], num_vars: int, cost: Optional[int] = None) -> "Assignment":
        values = [False] * num_vars
        for lit in literals:
            var = abs(lit)
            if var > len(values):
                values.extend([False] * (var - len(values)))
            values[var - 1] = lit > 0
        return cls(tuple(values), cost)

    @property
    def num_vars(self) -> int:
        return len(self.values)

    def value(self, var: int) -> bool:
        return self.values[var - 1]

    def literal_value(self, lit: int) -> bool:
        return self.values[abs(lit) - 1] == (lit > 0)

    def with_cost(self, cost: Optional[int]) -> "Assignment":
        return Assignment(self.values, cost)

    def to_literals(self) -> List[int]:
        return [i + 1 if v else -(i + 1) for i, v in enumerate(self.values)]

    def to_binary_string(self) -> str:
        return "".join("1" if v else "0" for v in self.values)


@dataclass(frozen=True)
class HardViolation:
    """Indices of hard clauses an assignment falsifies."""
    indices: Tuple[int, ...]


class SolverStatus(Enum):
    OPTIMUM = "OPTIMUM FOUND"
    SATISFIABLE = "SATISFIABLE"
    UNSATISFIABLE = "UNSATISFIABLE"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class SolverOutput:
    """Parsed `s`/`o`/`v` lines of a MaxSAT solver run."""
    status: SolverStatus
    assignment: Optional[Assignment] = None
    cost: Optional[int] = None

    @property
    def is_unsat(self) -> bool:
        return self.status is SolverStatus.UNSATISFIABLE
