import logging
from typing import Dict, Iterable, List, Optional, Set, Tuple

from pysat.formula import IDPool

from ilpsat.encode.clauses import ClauseList
from ilpsat.presolve.types import Fixed, MultiAggregated, SimpleAggregated, SimplifiedModel

logger = logging.getLogger(__name__)


class EncodeSession:
    """
    Output being assembled for one simplified model.

    `literal_of` is keyed by the index of the variable in the model presolve
    started from. Mapped variables are numbered first, in ascending index
    order; auxiliary variables follow.
    """

    def __init__(self):
        self.pool = IDPool()
        self.hard: ClauseList = []
        self.soft: List[Tuple[List[int], int]] = []
        self.literal_of: Dict[int, int] = {}
        self.fixed_values: Dict[int, int] = {}
        # (terms over WCNF literals, rhs) for sum(terms) = rhs
        self.pending_equalities: List[Tuple[List[Tuple[int, int]], int]] = []
        self.cost_offset = 0
        self._aux = 0

    @property
    def next_var(self) -> int:
        """Largest variable index handed out so far."""
        return self.pool.top

    def fresh(self) -> int:
        self._aux += 1
        return self.pool.id(("aux", self._aux))

    def add_hard(self, clauses: Iterable[List[int]]) -> None:
        self.hard.extend(clauses)

    def add_soft(self, clause: List[int], weight: int) -> None:
        self.soft.append((clause, weight))


def encode_variables(simp: SimplifiedModel, exclude: Optional[Iterable[int]] = None) -> EncodeSession:
    """
    Give a WCNF literal to every variable the encoded instance needs.

    Free variables occurring in rows, objective or multi-aggregations get
    fresh variables; simple aggregations reuse their representative's literal;
    every multi-aggregated variable gets a fresh variable whose defining
    equality is queued. `exclude` lists simplified-model indices that must
    stay unmapped.
    """
    session = EncodeSession()
    original_of = simp.original_index_of()
    skipped: Set[int] = set(exclude or ())

    used: Set[int] = set()
    for row in simp.model.constraints:
        used.update(row.variables)
    used.update(v for _, v in simp.model.objective.terms)
    reachable = {original_of[v] for v in used - skipped}

    dispositions = simp.var_map.dispositions
    for disp in dispositions:
        if isinstance(disp, MultiAggregated):
            reachable.update(v for _, v in disp.terms)

    for var in sorted(reachable):
        session.literal_of[var] = session.pool.id(("y", var))

    for var, disp in enumerate(dispositions):
        if isinstance(disp, Fixed):
            session.fixed_values[var] = disp.value
        elif isinstance(disp, SimpleAggregated):
            lit = session.literal_of.get(disp.target)
            if lit is not None:
                session.literal_of[var] = -lit if disp.negated else lit
        elif isinstance(disp, MultiAggregated):
            v = session.pool.id(("m", var))
            session.literal_of[var] = v
            # v = c0 + sum(c_i * y_i)  <=>  v - sum(c_i * y_i) = c0
            terms = [(1, v)] + [(-c, session.literal_of[t]) for c, t in disp.terms]
            session.pending_equalities.append((terms, disp.c0))

    logger.debug(
        "Mapped %d variables onto %d WCNF variables (%d fixed, %d multi-aggregated)",
        len(session.literal_of),
        session.next_var,
        len(session.fixed_values),
        len(session.pending_equalities),
    )
    return session
