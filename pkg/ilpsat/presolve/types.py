from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

from ilpsat.config import env_bool, env_int
from ilpsat.ilp.types import IlpModel, IlpVar, Term, VarKind


# ----------------------------------------------------------------------
# Variable dispositions
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Fixed:
    value: int

    def to_dict(self) -> Dict[str, Any]:
        return {"type": "fixed", "value": self.value}


@dataclass(frozen=True)
class SimpleAggregated:
    """y = target, or y = 1 - target when negated."""
    target: int
    negated: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {"type": "simple", "target": self.target, "negated": self.negated}


@dataclass(frozen=True)
class MultiAggregated:
    """y = c0 + sum(c_i * y_i)."""
    c0: int
    terms: Tuple[Term, ...]

    def value(self, values) -> int:
        return self.c0 + sum(c * values[v] for c, v in self.terms)

    def to_dict(self) -> Dict[str, Any]:
        return {"type": "multi", "c0": self.c0, "terms": [list(t) for t in self.terms]}


@dataclass(frozen=True)
class Free:
    def to_dict(self) -> Dict[str, Any]:
        return {"type": "free"}


FREE = Free()

Disposition = Union[Fixed, SimpleAggregated, MultiAggregated, Free]


@dataclass
class VarMap:
    """Disposition of every variable of the original model."""
    dispositions: List[Disposition]
    new_index_of: Dict[int, int] = field(default_factory=dict)

    @classmethod
    def identity(cls, num_vars: int) -> "VarMap":
        return cls([FREE] * num_vars, {i: i for i in range(num_vars)})

    def __len__(self) -> int:
        return len(self.dispositions)

    def is_free(self, var: int) -> bool:
        return isinstance(self.dispositions[var], Free)

    def free_vars(self) -> List[int]:
        return [i for i, d in enumerate(self.dispositions) if isinstance(d, Free)]

    def reindex(self) -> None:
        self.new_index_of = {v: i for i, v in enumerate(self.free_vars())}

    def copy(self) -> "VarMap":
        return VarMap(list(self.dispositions), dict(self.new_index_of))

    def lift(self, free_values: Dict[int, int]) -> List[int]:
        """
        Values of all original variables given values of the free ones
        (keyed by original index). Requires a canonical map.
        """
        values = [0] * len(self.dispositions)
        for i, disp in enumerate(self.dispositions):
            if isinstance(disp, Fixed):
                values[i] = disp.value
            elif isinstance(disp, Free):
                values[i] = free_values.get(i, 0)
            elif isinstance(disp, SimpleAggregated):
                rep = free_values.get(disp.target, 0)
                values[i] = 1 - rep if disp.negated else rep
        for i, disp in enumerate(self.dispositions):
            if isinstance(disp, MultiAggregated):
                values[i] = disp.value(values)
        return values

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dispositions": [d.to_dict() for d in self.dispositions],
            "new_index_of": {str(k): v for k, v in sorted(self.new_index_of.items())},
        }


# ----------------------------------------------------------------------
# Configuration and results
# ----------------------------------------------------------------------

@dataclass
class PresolveConfig:
    max_rounds: int = field(default_factory=lambda: env_int("ILPSAT_MAX_ROUNDS", 10))
    probing: bool = field(default_factory=lambda: env_bool("ILPSAT_PROBING", True))
    probe_limit: int = field(default_factory=lambda: env_int("ILPSAT_PROBE_LIMIT", 10_000))
    # probes read a snapshot and are merged in index order, so worker count never changes the result
    probe_workers: int = field(default_factory=lambda: env_int("ILPSAT_PROBE_WORKERS", 1))
    multi_aggregation: bool = field(default_factory=lambda: env_bool("ILPSAT_MULTI_AGGREGATION", True))
    detect_products: bool = field(default_factory=lambda: env_bool("ILPSAT_DETECT_PRODUCTS", True))
    define_indicators: bool = True

    def __post_init__(self):
        if self.max_rounds < 0:
            raise ValueError("max_rounds must be >= 0")
        if self.probe_limit < 0:
            raise ValueError("probe_limit must be >= 0")
        if self.probe_workers < 1:
            raise ValueError("probe_workers must be >= 1")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class ProbeResult:
    """
    Consequences of probing one variable.

    `aggregations` holds ``(w, v, negated)`` meaning w = v, or w = 1 - v.
    """
    var: int
    fixings: Tuple[Tuple[int, int], ...] = ()
    aggregations: Tuple[Tuple[int, int, bool], ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.fixings and not self.aggregations


@dataclass
class PresolveReport:
    decision_vars: int = 0
    fixed_vars: int = 0
    simple_aggregated: int = 0
    multi_aggregated: int = 0
    removed_constraints: int = 0
    rounds_executed: int = 0
    preprocessing_time_seconds: float = 0.0
    # filled in once the simplified model has been encoded
    delta_vars: Optional[float] = None
    delta_clauses: Optional[float] = None

    @property
    def aggregated(self) -> int:
        return self.simple_aggregated + self.multi_aggregated

    @property
    def fixed_vars_rate(self) -> float:
        return self.fixed_vars / self.decision_vars if self.decision_vars else 0.0

    @property
    def aggr_vars_rate(self) -> float:
        return self.aggregated / self.decision_vars if self.decision_vars else 0.0

    @property
    def simple_aggr_ratio(self) -> float:
        return self.simple_aggregated / self.aggregated if self.aggregated else 1.0

    @classmethod
    def from_var_map(cls, vars_: List[IlpVar], var_map: VarMap, **kwargs) -> "PresolveReport":
        report = cls(**kwargs)
        for var in vars_:
            if var.kind is not VarKind.DECISION:
                continue
            report.decision_vars += 1
            disp = var_map.dispositions[var.index]
            if isinstance(disp, Fixed):
                report.fixed_vars += 1
            elif isinstance(disp, SimpleAggregated):
                report.simple_aggregated += 1
            elif isinstance(disp, MultiAggregated):
                report.multi_aggregated += 1
        return report

    def to_dict(self) -> Dict[str, Any]:
        return {
            "fixedVarsRate": self.fixed_vars_rate,
            "aggrVarsRate": self.aggr_vars_rate,
            "simpleAggrRatio": self.simple_aggr_ratio,
            "fixedVars": self.fixed_vars,
            "simpleAggregated": self.simple_aggregated,
            "multiAggregated": self.multi_aggregated,
            "removedConstraints": self.removed_constraints,
            "roundsExecuted": self.rounds_executed,
            "preprocessingTimeSeconds": self.preprocessing_time_seconds,
        }


@dataclass
class SimplifiedModel:
    """
    Result of presolve.

    `model` is indexed by the free variables (``var_map.new_index_of``);
    `original_vars` keeps the variables of the model presolve started from.
    """
    model: IlpModel
    var_map: VarMap
    original_vars: List[IlpVar]
    objective_offset_delta: int = 0
    report: PresolveReport = field(default_factory=PresolveReport)

    @classmethod
    def unreduced(cls, model: IlpModel) -> "SimplifiedModel":
        """Wrap a model that presolve has not touched."""
        return cls(
            model=model,
            var_map=VarMap.identity(model.num_vars),
            original_vars=list(model.vars),
            report=PresolveReport.from_var_map(model.vars, VarMap.identity(model.num_vars)),
        )

    def original_index_of(self) -> Dict[int, int]:
        return {new: old for old, new in self.var_map.new_index_of.items()}
