"""
Everything needed to turn a solution of the simplified instance back into a
solution of the original one, with a versioned JSON sidecar format.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Union

from ilpsat.errors import ReconstructionError
from ilpsat.ilp.types import VarKind
from ilpsat.presolve.types import (
    FREE,
    Disposition,
    Fixed,
    MultiAggregated,
    SimpleAggregated,
    VarMap,
)

RECORD_VERSION = 1


@dataclass
class ReconstructionRecord:
    """
    `decision_origin` maps ILP variable index -> original WCNF variable for
    every decision variable; `literal_of` maps ILP variable index -> literal
    of the simplified instance.
    """
    var_map: VarMap
    literal_of: Dict[int, int]
    origin_num_vars: int
    simp_num_vars: int
    cost_offset: int
    decision_origin: Dict[int, int] = field(default_factory=dict)

    @property
    def fixed_values(self) -> Dict[int, int]:
        return {i: d.value for i, d in enumerate(self.var_map.dispositions) if isinstance(d, Fixed)}

    @classmethod
    def from_encoding(cls, simp, encoded, origin_num_vars: int) -> "ReconstructionRecord":
        """Record for a SimplifiedModel and the EncodedModel built from it."""
        return cls(
            var_map=simp.var_map,
            literal_of=dict(encoded.session.literal_of),
            origin_num_vars=origin_num_vars,
            simp_num_vars=encoded.instance.num_vars,
            cost_offset=encoded.instance.cost_offset,
            decision_origin={
                v.index: v.origin for v in simp.original_vars if v.kind is VarKind.DECISION and v.origin is not None
            },
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "version": RECORD_VERSION,
            "originNumVars": self.origin_num_vars,
            "simpNumVars": self.simp_num_vars,
            "costOffset": self.cost_offset,
            "decisionOrigin": {str(k): v for k, v in sorted(self.decision_origin.items())},
            "literals": {str(k): v for k, v in sorted(self.literal_of.items())},
            "dispositions": [d.to_dict() for d in self.var_map.dispositions],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ReconstructionRecord":
        version = data.get("version")
        if version != RECORD_VERSION:
            raise ReconstructionError(f"unsupported record version {version!r}")
        try:
            dispositions = [_disposition_from_dict(d) for d in data["dispositions"]]
            var_map = VarMap(dispositions)
            var_map.reindex()
            return cls(
                var_map=var_map,
                literal_of={int(k): int(v) for k, v in data["literals"].items()},
                origin_num_vars=int(data["originNumVars"]),
                simp_num_vars=int(data["simpNumVars"]),
                cost_offset=int(data["costOffset"]),
                decision_origin={int(k): int(v) for k, v in data["decisionOrigin"].items()},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ReconstructionError(f"malformed reconstruction record: {exc}") from exc

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ReconstructionRecord":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ReconstructionError(f"{path}: not a JSON document: {exc}") from exc
        return cls.from_dict(data)


def _disposition_from_dict(data: Dict[str, Any]) -> Disposition:
    kind = data["type"]
    if kind == "free":
        return FREE
    if kind == "fixed":
        return Fixed(int(data["value"]))
    if kind == "simple":
        return SimpleAggregated(int(data["target"]), bool(data["negated"]))
    if kind == "multi":
        terms: List = data["terms"]
        return MultiAggregated(int(data["c0"]), tuple((int(c), int(v)) for c, v in terms))
    raise ValueError(f"unknown disposition type {kind!r}")
