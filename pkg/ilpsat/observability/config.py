from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional

from ilpsat.config import env_bool, env_int, env_str


@dataclass
class TelemetryConfig:
    """
    OpenTelemetry settings for the pipeline.

    Everything is off by default: a plain run creates no exporters and the
    managers fall back to no-op instruments. Console exporters write to
    stderr so stdout stays reserved for solver lines and JSON.
    """
    service_name: str = field(
        default_factory=lambda: env_str("ILPSAT_SERVICE_NAME", "ilpsat")
    )
    resource_attributes: Dict[str, str] = field(default_factory=dict)
    collector_endpoint: Optional[str] = field(
        default_factory=lambda: env_str("OTEL_EXPORTER_OTLP_ENDPOINT", None)
    )
    headers: Dict[str, str] = field(default_factory=dict)

    enable_traces: bool = field(default_factory=lambda: env_bool("ILPSAT_ENABLE_TRACES", False))
    enable_metrics: bool = field(default_factory=lambda: env_bool("ILPSAT_ENABLE_METRICS", False))
    enable_logs: bool = field(default_factory=lambda: env_bool("ILPSAT_ENABLE_LOGS", False))
    console_export: bool = field(default_factory=lambda: env_bool("ILPSAT_CONSOLE_EXPORT", False))

    # batch export settings
    export_interval_ms: int = field(default_factory=lambda: env_int("ILPSAT_EXPORT_INTERVAL_MS", 5000))
    max_queue_size: int = 2048
    max_export_batch_size: int = 512
    max_span_attributes: int = 100

    @property
    def enabled(self) -> bool:
        return self.enable_traces or self.enable_metrics or self.enable_logs

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
