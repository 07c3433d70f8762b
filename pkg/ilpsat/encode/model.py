"""
Re-encoding of a simplified 0-1 ILP as a weighted partial MaxSAT instance.

Each row is dispatched on its constraint class:

    logicor               one clause
    softlink              one clause when clause-shaped, PB otherwise
    setppc_packing        at-most-one
    setppc_partitioning   at-most-one plus at-least-one
    logicand              the n + 1 product clauses
    linear                PB encoding

The objective ``maximize sum(c * v)`` becomes soft units: ``(v, c)`` for
c > 0 and ``(-v, -c)`` for c < 0. With P the sum of positive coefficients,
the output cost offset is

    base offset + soft weight total - objective offset delta - P

so both instances report the same absolute optimum.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Set, Tuple

from ilpsat.config import env_int
from ilpsat.encode.clauses import AmoMethod, encode_amo, encode_and, encode_or, encode_partitioning
from ilpsat.encode.pb import encode_pb
from ilpsat.encode.session import EncodeSession, encode_variables
from ilpsat.errors import NegativeCostOffsetError, UnencodableError
from ilpsat.ilp.bridge import clause_literals, product_shape
from ilpsat.ilp.types import ConstraintClass, LinConstraint, VarKind
from ilpsat.maxsat.types import Clause, WcnfInstance
from ilpsat.presolve.types import MultiAggregated, SimpleAggregated, SimplifiedModel

logger = logging.getLogger(__name__)


@dataclass
class EncodeConfig:
    bdd_node_limit: int = field(default_factory=lambda: env_int("ILPSAT_BDD_NODE_LIMIT", 100_000))
    amo_pairwise_max: int = field(default_factory=lambda: env_int("ILPSAT_AMO_PAIRWISE_MAX", 6))

    def __post_init__(self):
        if self.bdd_node_limit < 1:
            raise ValueError("bdd_node_limit must be >= 1")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class EncodedModel:
    instance: WcnfInstance
    session: EncodeSession
    # rows emitted as a single soft clause instead of a product definition
    folded_products: int = 0


def _private_products(simp: SimplifiedModel) -> Dict[int, Tuple[int, List[Tuple[int, bool]], int]]:
    """
    LogicalAnd rows whose output is an indicator used nowhere else and whose
    objective reward is on the output's complement.

    Such a row plus its soft unit is one soft clause over the negated inputs.
    Returns row index -> (output, inputs, objective coefficient).
    """
    model = simp.model
    occurrences: Dict[int, int] = {}
    for row in model.constraints:
        for var in row.variables:
            occurrences[var] = occurrences.get(var, 0) + 1

    shared: Set[int] = set()
    for var, disp in enumerate(simp.var_map.dispositions):
        if isinstance(disp, MultiAggregated):
            shared.update(v for _, v in disp.terms)
        elif isinstance(disp, SimpleAggregated) and simp.original_vars[var].kind is VarKind.DECISION:
            shared.add(disp.target)

    original_of = simp.original_index_of()
    gain = {v: c for c, v in model.objective.terms}
    found: Dict[int, Tuple[int, List[Tuple[int, bool]], int]] = {}
    for r, row in enumerate(model.constraints):
        if row.cclass is not ConstraintClass.LOGICAL_AND:
            continue
        shape = product_shape(row.terms, row.lhs, row.rhs)
        if shape is None:
            continue
        (out, out_neg), inputs = shape
        coef = gain.get(out, 0)
        if (
            model.vars[out].kind is not VarKind.INDICATOR
            or occurrences.get(out) != 1
            or original_of[out] in shared
            or coef == 0
            # the soft literal (out if coef > 0 else -out) must be the complement of the output literal
            or out_neg != (coef > 0)
        ):
            continue
        found[r] = (out, inputs, coef)
    return found


def _row_literals(row: LinConstraint, lit_of: Dict[int, int]) -> List[Tuple[int, int]]:
    return [(c, lit_of[v]) for c, v in row.terms]


def _encode_row(r: int, row: LinConstraint, lit_of: Dict[int, int], session: EncodeSession, config: EncodeConfig) -> None:
    def lits_of(ilp_lits) -> List[int]:
        return [-lit_of[v] if neg else lit_of[v] for v, neg in ilp_lits]

    cclass = row.cclass
    if cclass in (ConstraintClass.LOGICAL_OR, ConstraintClass.SOFT_LINK):
        clause = clause_literals(row)
        if clause is not None:
            session.add_hard(encode_or(lits_of(clause)))
            return
        if cclass is ConstraintClass.LOGICAL_OR:
            logger.debug("Row %d is classed logicor but is not a clause, using PB", r)
    elif cclass in (ConstraintClass.SETPPC_PACKING, ConstraintClass.SETPPC_PARTITIONING):
        lits = [lit_of[v] for _, v in row.terms]
        method = AmoMethod.for_size(len(lits), config.amo_pairwise_max)
        if cclass is ConstraintClass.SETPPC_PACKING:
            session.add_hard(encode_amo(lits, method, session.fresh))
        else:
            session.add_hard(encode_partitioning(lits, method, session.fresh))
        return
    elif cclass is ConstraintClass.LOGICAL_AND:
        shape = product_shape(row.terms, row.lhs, row.rhs)
        if shape is not None:
            output, inputs = shape
            session.add_hard(encode_and(lits_of([output])[0], lits_of(inputs)))
            return
    elif cclass is not ConstraintClass.GENERAL_LINEAR:
        raise UnencodableError(cclass.value, r)

    session.add_hard(
        encode_pb(_row_literals(row, lit_of), row.lhs, row.rhs, session.fresh, config.bdd_node_limit)
    )


def encode_objective(simp: SimplifiedModel, session: EncodeSession, skip: Optional[Set[int]] = None) -> int:
    """
    Emit the objective as soft units and set the session cost offset.

    Terms on variables in `skip` are already represented by folded product
    clauses; they still count towards the positive total.
    """
    model = simp.model
    original_of = simp.original_index_of()
    skip = skip or set()
    positive_total = 0
    for coef, var in model.objective.terms:
        if coef > 0:
            positive_total += coef
        if var in skip:
            continue
        lit = session.literal_of[original_of[var]]
        if coef > 0:
            session.add_soft([lit], coef)
        else:
            session.add_soft([-lit], -coef)

    offset = (
        model.base_cost_offset
        + model.soft_weight_total
        - simp.objective_offset_delta
        - model.objective.offset
        - positive_total
    )
    if offset < 0:
        raise NegativeCostOffsetError(f"cost offset would be {offset}")
    session.cost_offset = offset
    return offset


def encode_model(simp: SimplifiedModel, config: Optional[EncodeConfig] = None) -> EncodedModel:
    """Encode `simp` as a WCNF instance whose optimum matches the original instance."""
    config = config or EncodeConfig()
    model = simp.model
    folded = _private_products(simp)
    folded_outputs = {out for out, _, _ in folded.values()}
    session = encode_variables(simp, exclude=folded_outputs)

    original_of = simp.original_index_of()
    lit_of = {new: session.literal_of[old] for new, old in original_of.items() if old in session.literal_of}

    for r, row in enumerate(model.constraints):
        if r in folded:
            _, inputs, coef = folded[r]
            clause = [lit_of[v] if neg else -lit_of[v] for v, neg in inputs]
            session.add_soft(clause, abs(coef))
            continue
        _encode_row(r, row, lit_of, session, config)

    for terms, rhs in session.pending_equalities:
        session.add_hard(encode_pb(terms, rhs, rhs, session.fresh, config.bdd_node_limit))

    encode_objective(simp, session, skip=folded_outputs)

    instance = WcnfInstance(
        num_vars=session.next_var,
        hard=[Clause.of(c) for c in session.hard],
        soft=[(Clause.of(c), w) for c, w in session.soft],
        cost_offset=session.cost_offset,
    )
    logger.debug("Encoded model: %s (%d folded products)", instance.summary(), len(folded))
    return EncodedModel(instance=instance, session=session, folded_products=len(folded))
