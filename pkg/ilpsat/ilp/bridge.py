"""
Translation of a weighted partial MaxSAT instance into a 0-1 ILP.

    maximize    sum_c w_c * z_c
    subject to  sum_{x in H+} y_x + sum_{x in H-} (1 - y_x) >= 1     every hard clause
                z_c <= sum_{x in S+} y_x + sum_{x in S-} (1 - y_x)   every soft clause
                y, z binary

Rows are stored as ``lhs <= sum(coef * var) <= rhs`` with the constants of
negative literals folded into the bounds. The module also carries the
literal-level helpers shared by presolve and the encoder: an ILP literal is
a ``(var, negated)`` pair.
"""

import logging
from typing import List, Optional, Sequence, Tuple

from ilpsat.errors import EmptyHardClauseError
from ilpsat.ilp.types import (
    ConstraintClass,
    IlpModel,
    IlpVar,
    LinConstraint,
    Objective,
    Term,
    VarKind,
)
from ilpsat.maxsat.types import WcnfInstance

logger = logging.getLogger(__name__)

IlpLit = Tuple[int, bool]  # (variable index, negated)


# ----------------------------------------------------------------------
# Literal helpers
# ----------------------------------------------------------------------

def clause_row(lits: Sequence[IlpLit], cclass: ConstraintClass = ConstraintClass.LOGICAL_OR) -> LinConstraint:
    """Row for ``l1 v ... v lk`` over ILP literals."""
    terms = [(-1 if neg else 1, var) for var, neg in lits]
    negs = sum(1 for _, neg in lits if neg)
    return LinConstraint.build(terms, lhs=1 - negs, rhs=None, cclass=cclass)


def term_literal(coef: int, var: int) -> IlpLit:
    """Literal of a unit term: +y reads as y, -y as (not y) shifted by -1."""
    return (var, coef < 0)


def clause_literals(row: LinConstraint) -> Optional[List[IlpLit]]:
    """
    Literals of ``row`` when it is one-sided, has unit coefficients and reads
    as a single clause; None otherwise.
    """
    if row.lhs is not None and row.rhs is not None:
        return None
    if any(abs(c) != 1 for c, _ in row.terms):
        return None
    ge_row = row if row.rhs is None else row.negated()
    negs = sum(1 for c, _ in ge_row.terms if c < 0)
    if ge_row.lhs != 1 - negs:
        return None
    return [term_literal(c, v) for c, v in ge_row.terms]


def and_row(output: IlpLit, inputs: Sequence[IlpLit]) -> LinConstraint:
    """
    Row for ``output <-> AND(inputs)``.

    In literal form this is ``n*l_out - sum(l_in) in [1 - n, 0]``; constants
    of negated literals move into the bounds.
    """
    n = len(inputs)
    out_var, out_neg = output
    terms: List[Term] = [(-n if out_neg else n, out_var)]
    constant = n if out_neg else 0
    for var, neg in inputs:
        terms.append((1 if neg else -1, var))
        if neg:
            constant -= 1
    return LinConstraint.build(
        terms,
        lhs=1 - n - constant,
        rhs=-constant,
        cclass=ConstraintClass.LOGICAL_AND,
    )


def product_shape(
    terms: Sequence[Term], lhs: Optional[int], rhs: Optional[int]
) -> Optional[Tuple[IlpLit, List[IlpLit]]]:
    """Inverse of `and_row` for n >= 2 inputs; None when the row has another shape."""
    n = len(terms) - 1
    if n < 2 or lhs is None or rhs is None:
        return None
    heads = [(c, v) for c, v in terms if abs(c) == n]
    if len(heads) != 1 or any(abs(c) != 1 for c, v in terms if (c, v) != heads[0]):
        return None
    head_coef, head_var = heads[0]
    output = (head_var, head_coef < 0)
    inputs = [(v, c > 0) for c, v in terms if (c, v) != heads[0]]
    constant = (n if output[1] else 0) - sum(1 for _, neg in inputs if neg)
    if lhs != 1 - n - constant or rhs != -constant:
        return None
    return output, inputs


# ----------------------------------------------------------------------
# Classification
# ----------------------------------------------------------------------

def classify_constraint(row: LinConstraint) -> LinConstraint:
    """Assign the syntactic class of ``row``; terms and sides are left alone."""
    coefs = [c for c, _ in row.terms]
    all_plus_one = bool(coefs) and all(c == 1 for c in coefs)

    if all_plus_one and row.lhs is None and row.rhs == 1:
        cclass = ConstraintClass.SETPPC_PACKING
    elif all_plus_one and row.lhs == 1 and row.rhs == 1:
        cclass = ConstraintClass.SETPPC_PARTITIONING
    elif (
        coefs
        and all(abs(c) == 1 for c in coefs)
        and row.rhs is None
        and row.lhs == 1 - sum(1 for c in coefs if c < 0)
    ):
        cclass = ConstraintClass.LOGICAL_OR
    elif row.cclass is ConstraintClass.LOGICAL_AND and product_shape(row.terms, row.lhs, row.rhs):
        cclass = ConstraintClass.LOGICAL_AND
    elif row.cclass in (ConstraintClass.SOFT_LINK, ConstraintClass.UNSUPPORTED):
        cclass = row.cclass
    else:
        cclass = ConstraintClass.GENERAL_LINEAR

    if cclass is row.cclass:
        return row
    return row.with_class(cclass)


# ----------------------------------------------------------------------
# Model construction
# ----------------------------------------------------------------------

def build_ilp(instance: WcnfInstance) -> IlpModel:
    """
    Build the ILP of a WCNF instance.

    Decision variable of WCNF variable x has index x - 1; indicator variables
    follow in soft clause order. Tautological clauses are dropped: hard ones
    are always satisfied, soft ones are never paid.
    """
    if instance.has_empty_hard:
        raise EmptyHardClauseError("instance contains an empty hard clause")

    vars_: List[IlpVar] = [
        IlpVar(index=x - 1, kind=VarKind.DECISION, origin=x) for x in range(1, instance.num_vars + 1)
    ]
    constraints: List[LinConstraint] = []
    dropped = 0

    for clause in instance.hard:
        if clause.is_tautology:
            dropped += 1
            continue
        lits = [(abs(lit) - 1, lit < 0) for lit in clause.literals]
        constraints.append(classify_constraint(clause_row(lits)))

    objective_terms: List[Term] = []
    soft_total = 0
    for soft_index, (clause, weight) in enumerate(instance.soft):
        if clause.is_tautology:
            dropped += 1
            continue
        z = len(vars_)
        vars_.append(IlpVar(index=z, kind=VarKind.INDICATOR, origin=soft_index))
        # z + sum_{neg} y - sum_{pos} y <= #neg
        terms: List[Term] = [(1, z)]
        negs = 0
        for lit in clause.literals:
            if lit > 0:
                terms.append((-1, lit - 1))
            else:
                terms.append((1, -lit - 1))
                negs += 1
        constraints.append(LinConstraint.build(terms, lhs=None, rhs=negs, cclass=ConstraintClass.SOFT_LINK))
        objective_terms.append((weight, z))
        soft_total += weight

    model = IlpModel(
        vars=vars_,
        constraints=constraints,
        objective=Objective(terms=tuple(objective_terms), offset=0),
        soft_weight_total=soft_total,
        base_cost_offset=instance.cost_offset,
        dropped_tautologies=dropped,
    )
    logger.debug("Built ILP: %s (dropped %d tautologies)", model.summary(), dropped)
    return model


# ----------------------------------------------------------------------
# LP text export
# ----------------------------------------------------------------------

def _linear_expr(terms: Sequence[Term], names: Sequence[str]) -> str:
    if not terms:
        return "0"
    parts = []
    for i, (coef, var) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = names[var] if mag == 1 else f"{mag} {names[var]}"
        if i == 0:
            parts.append(f"- {body}" if coef < 0 else body)
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


def write_lp(model: IlpModel) -> str:
    """CPLEX-style LP text of ``model``, for cross-checking with external ILP tools."""
    names = [v.name() for v in model.vars]
    out = ["\\ ilpsat model", f"\\ objective offset {model.objective.offset}", "Maximize"]
    out.append(f" obj: {_linear_expr(model.objective.terms, names)}")
    out.append("Subject To")
    for i, row in enumerate(model.constraints):
        expr = _linear_expr(row.terms, names)
        if row.is_equality:
            out.append(f" c{i}: {expr} = {row.lhs}")
            continue
        if row.lhs is not None and row.rhs is not None:
            out.append(f" c{i}_lo: {expr} >= {row.lhs}")
            out.append(f" c{i}_hi: {expr} <= {row.rhs}")
        elif row.lhs is not None:
            out.append(f" c{i}: {expr} >= {row.lhs}")
        else:
            out.append(f" c{i}: {expr} <= {row.rhs}")
    fixed = [v for v in model.vars if v.is_fixed]
    if fixed:
        out.append("Bounds")
        out.extend(f" {names[v.index]} = {v.lower}" for v in fixed)
    out.append("Binary")
    out.extend(f" {name}" for name in names)
    out.append("End")
    return "\n".join(out) + "\n"
