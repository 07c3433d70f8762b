from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional

from ilpsat.config import env_int, env_str
from ilpsat.encode.model import EncodeConfig
from ilpsat.maxsat.wcnf_io import WcnfDialect
from ilpsat.presolve.types import PresolveConfig


class GateMode(Enum):
    PAPER = "paper"  # fewer variables and fewer hard clauses, both strict
    ALWAYS = "always"
    NEVER = "never"

    @classmethod
    def from_name(cls, name: str) -> "GateMode":
        key = name.lower()
        if key == "smaller":
            return cls.PAPER
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown gate mode {name!r}; expected one of paper, always, never") from None


class SolverKind(Enum):
    BUILTIN = "builtin"
    RC2 = "rc2"
    EXTERNAL = "external"


@dataclass
class SolverSpec:
    """
    Which MaxSAT solver handles the selected instance.

    `command` is an external command template with an ``{input}``
    placeholder and an optional ``{timeout}`` one.
    """
    kind: SolverKind = SolverKind.BUILTIN
    command: Optional[str] = field(default_factory=lambda: env_str("ILPSAT_SOLVER_CMD", None))
    time_limit: Optional[float] = None
    node_budget: int = field(default_factory=lambda: env_int("ILPSAT_NODE_BUDGET", 10_000_000))

    def __post_init__(self):
        if self.kind is SolverKind.EXTERNAL and not self.command:
            raise ValueError("an external solver needs a command template")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")

    @classmethod
    def external(cls, command: str, time_limit: Optional[float] = None) -> "SolverSpec":
        return cls(kind=SolverKind.EXTERNAL, command=command, time_limit=time_limit)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "command": self.command, "timeLimit": self.time_limit}


@dataclass
class SizeGuard:
    max_vars: int = field(default_factory=lambda: env_int("ILPSAT_GUARD_VARS", 200_000))
    max_clauses: int = field(default_factory=lambda: env_int("ILPSAT_GUARD_CLAUSES", 1_000_000))

    @classmethod
    def parse(cls, text: str) -> "SizeGuard":
        """Read ``"V,C"``."""
        try:
            v, c = (int(part) for part in text.split(","))
        except ValueError:
            raise ValueError(f"size guard must look like VARS,CLAUSES, got {text!r}") from None
        return cls(v, c)

    def admits(self, num_vars: int, num_clauses: int) -> bool:
        return num_vars <= self.max_vars and num_clauses <= self.max_clauses


@dataclass
class PipelineConfig:
    input_path: Optional[Path] = None
    # dialect of every written WCNF file; input dialect is detected
    dialect: WcnfDialect = WcnfDialect.MSE22
    presolve: PresolveConfig = field(default_factory=PresolveConfig)
    encode: EncodeConfig = field(default_factory=EncodeConfig)
    gate: GateMode = field(default_factory=lambda: GateMode.from_name(env_str("ILPSAT_GATE", "paper")))
    solver: SolverSpec = field(default_factory=SolverSpec)
    size_guard: SizeGuard = field(default_factory=SizeGuard)

    simp_out: Optional[Path] = None
    map_out: Optional[Path] = None
    stats_out: Optional[Path] = None

    # instances with at most this many variables are also checked for optimality by brute force
    oracle_var_limit: int = field(default_factory=lambda: env_int("ILPSAT_ORACLE_VAR_LIMIT", 20))
    record_timings: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "inputPath": str(self.input_path) if self.input_path else None,
            "dialect": self.dialect.value,
            "presolve": self.presolve.to_dict(),
            "encode": self.encode.to_dict(),
            "gate": self.gate.value,
            "solver": self.solver.to_dict(),
            "sizeGuard": asdict(self.size_guard),
            "oracleVarLimit": self.oracle_var_limit,
        }
