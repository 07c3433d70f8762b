from .types import (
    ConstraintClass,
    IlpModel,
    IlpVar,
    LinConstraint,
    Objective,
    VarKind,
    normalize_terms,
)
from .bridge import (
    and_row,
    build_ilp,
    classify_constraint,
    clause_literals,
    clause_row,
    product_shape,
    write_lp,
)

__all__ = [
    "ConstraintClass",
    "IlpModel",
    "IlpVar",
    "LinConstraint",
    "Objective",
    "VarKind",
    "normalize_terms",
    "and_row",
    "build_ilp",
    "classify_constraint",
    "clause_literals",
    "clause_row",
    "product_shape",
    "write_lp",
]
