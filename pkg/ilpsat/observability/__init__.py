from .config import TelemetryConfig
from .collector import TelemetryCollector, configure_telemetry, get_telemetry
from .decorators import record_presolve_report, traced_stage
from .logs import LogLevel, LogsManager
from .metrics import MetricsManager
from .otel_setup import setup_otel
from .traces import DummySpan, TracesManager

__all__ = [
    "TelemetryConfig",
    "TelemetryCollector",
    "configure_telemetry",
    "get_telemetry",
    "record_presolve_report",
    "traced_stage",
    "LogLevel",
    "LogsManager",
    "MetricsManager",
    "setup_otel",
    "DummySpan",
    "TracesManager",
]
