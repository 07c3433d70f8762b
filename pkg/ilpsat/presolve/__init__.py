from .types import (
    FREE,
    Fixed,
    Free,
    MultiAggregated,
    PresolveConfig,
    PresolveReport,
    ProbeResult,
    SimpleAggregated,
    SimplifiedModel,
    VarMap,
)
from .propagation import Propagator, activity_bounds, propagate_bounds
from .canonical import canonicalize
from .engine import (
    deduplicate,
    define_indicators,
    detect_aggregations,
    detect_products,
    fix_from_bounds,
    presolve,
    probe_variable,
    remove_redundant,
    substitute,
    tighten_coefficients,
)

__all__ = [
    "FREE",
    "Fixed",
    "Free",
    "MultiAggregated",
    "PresolveConfig",
    "PresolveReport",
    "ProbeResult",
    "SimpleAggregated",
    "SimplifiedModel",
    "VarMap",
    "Propagator",
    "activity_bounds",
    "propagate_bounds",
    "canonicalize",
    "deduplicate",
    "define_indicators",
    "detect_aggregations",
    "detect_products",
    "fix_from_bounds",
    "presolve",
    "probe_variable",
    "remove_redundant",
    "substitute",
    "tighten_coefficients",
]
