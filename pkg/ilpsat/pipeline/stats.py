"""
Per-run statistics and their batch aggregation.

Percentages follow the sign convention "negative = shrink":
``deltaVarsPct = 100 * (simpVars - originVars) / originVars``. Clause deltas
count hard and soft clauses together.
"""

import json
import statistics
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional

from ilpsat.maxsat.types import WcnfInstance
from ilpsat.presolve.types import PresolveReport


class GateDecision(Enum):
    USED_SIMPLIFIED = "UsedSimplified"
    USED_ORIGINAL = "UsedOriginal"
    PREPROCESS_SKIPPED = "PreprocessSkipped"


class InstanceGroup(Enum):
    SMALLER = "Smaller"
    BIGGER = "Bigger"


# columns averaged per group by `aggregate_stats`
TABLE_COLUMNS = (
    "fixedVarsRate",
    "aggrVarsRate",
    "simpleAggrRatio",
    "deltaVarsPct",
    "deltaClausesPct",
    "deltaWeightPct",
)


def _pct_change(before: int, after: int) -> Optional[float]:
    if before == 0:
        return 0.0 if after == 0 else None
    return 100.0 * (after - before) / before


def is_smaller(origin: WcnfInstance, simp: WcnfInstance) -> bool:
    """Strictly fewer variables and strictly fewer hard clauses."""
    return simp.num_vars < origin.num_vars and len(simp.hard) < len(origin.hard)


@dataclass
class RunStats:
    origin_vars: int
    origin_hard: int
    origin_soft: int
    origin_soft_weight_total: int
    simp_vars: Optional[int] = None
    simp_hard: Optional[int] = None
    simp_soft: Optional[int] = None
    simp_soft_weight_total: Optional[int] = None
    delta_vars_pct: Optional[float] = None
    delta_clauses_pct: Optional[float] = None
    delta_weight_pct: Optional[float] = None
    fixed_vars_rate: Optional[float] = None
    aggr_vars_rate: Optional[float] = None
    simple_aggr_ratio: Optional[float] = None
    preprocessing_time_seconds: Optional[float] = None
    gate_decision: Optional[GateDecision] = None
    group: Optional[InstanceGroup] = None
    solve_time_seconds: Optional[float] = None
    final_cost: Optional[int] = None
    status: Optional[str] = None
    verified: bool = False
    instance: Optional[str] = None

    def to_dict(self, timings: bool = True) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "instance": self.instance,
            "originVars": self.origin_vars,
            "originHard": self.origin_hard,
            "originSoft": self.origin_soft,
            "originSoftWeightTotal": self.origin_soft_weight_total,
            "simpVars": self.simp_vars,
            "simpHard": self.simp_hard,
            "simpSoft": self.simp_soft,
            "simpSoftWeightTotal": self.simp_soft_weight_total,
            "deltaVarsPct": self.delta_vars_pct,
            "deltaClausesPct": self.delta_clauses_pct,
            "deltaWeightPct": self.delta_weight_pct,
            "fixedVarsRate": self.fixed_vars_rate,
            "aggrVarsRate": self.aggr_vars_rate,
            "simpleAggrRatio": self.simple_aggr_ratio,
            "gateDecision": self.gate_decision.value if self.gate_decision else None,
            "group": self.group.value if self.group else None,
            "finalCost": self.final_cost,
            "status": self.status,
            "verified": self.verified,
        }
        if timings:
            data["preprocessingTimeSeconds"] = self.preprocessing_time_seconds
            data["solveTimeSeconds"] = self.solve_time_seconds
        return data

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings), sort_keys=True)


def compute_stats(
    origin: WcnfInstance,
    simp: Optional[WcnfInstance] = None,
    report: Optional[PresolveReport] = None,
    timings: Optional[Dict[str, float]] = None,
) -> RunStats:
    """
    Size and reduction metrics of one run. Without a simplified instance the
    deltas stay None; without a report the rates do.
    """
    timings = timings or {}
    stats = RunStats(
        origin_vars=origin.num_vars,
        origin_hard=len(origin.hard),
        origin_soft=len(origin.soft),
        origin_soft_weight_total=origin.soft_weight_total(),
        preprocessing_time_seconds=timings.get("preprocess"),
        solve_time_seconds=timings.get("solve"),
    )
    if simp is not None:
        stats.simp_vars = simp.num_vars
        stats.simp_hard = len(simp.hard)
        stats.simp_soft = len(simp.soft)
        stats.simp_soft_weight_total = simp.soft_weight_total()
        stats.delta_vars_pct = _pct_change(origin.num_vars, simp.num_vars)
        stats.delta_clauses_pct = _pct_change(origin.num_clauses, simp.num_clauses)
        stats.delta_weight_pct = _pct_change(stats.origin_soft_weight_total, stats.simp_soft_weight_total)
        stats.group = InstanceGroup.SMALLER if is_smaller(origin, simp) else InstanceGroup.BIGGER
    if report is not None:
        stats.fixed_vars_rate = report.fixed_vars_rate
        stats.aggr_vars_rate = report.aggr_vars_rate
        stats.simple_aggr_ratio = report.simple_aggr_ratio
        report.delta_vars = stats.delta_vars_pct
        report.delta_clauses = stats.delta_clauses_pct
    return stats


def aggregate_stats(rows: Iterable[Dict[str, Any]]) -> Dict[str, Dict[str, Any]]:
    """
    Mean of every table column per group, plus an "All" row. Rows without a
    group (preprocessing skipped or failed) only count towards "All".
    """
    buckets: Dict[str, List[Dict[str, Any]]] = {"Smaller": [], "Bigger": [], "All": []}
    for row in rows:
        buckets["All"].append(row)
        if row.get("group") in buckets:
            buckets[row["group"]].append(row)

    table: Dict[str, Dict[str, Any]] = {}
    for name, members in buckets.items():
        entry: Dict[str, Any] = {"count": len(members)}
        for column in TABLE_COLUMNS:
            values = [m[column] for m in members if m.get(column) is not None]
            entry[column] = statistics.mean(values) if values else None
        table[name] = entry
    return table


def format_table(table: Dict[str, Dict[str, Any]]) -> str:
    """Fixed-width text rendering of `aggregate_stats` output."""
    header = ["group", "count", *TABLE_COLUMNS]
    lines = ["  ".join(f"{h:>16}" for h in header)]
    for name, entry in table.items():
        cells = [f"{name:>16}", f"{entry['count']:>16}"]
        for column in TABLE_COLUMNS:
            value = entry[column]
            if value is None:
                cells.append(f"{'-':>16}")
            elif column.endswith("Pct"):
                cells.append(f"{value:>15.2f}%")
            else:
                cells.append(f"{100 * value:>15.2f}%")
        lines.append("  ".join(cells))
    return "\n".join(lines) + "\n"
