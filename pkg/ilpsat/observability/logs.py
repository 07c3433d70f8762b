import logging
import socket
from enum import Enum
from typing import Any, Dict, Optional

from opentelemetry._logs import SeverityNumber
from opentelemetry.trace import get_current_span

from ilpsat.observability.config import TelemetryConfig


class LogLevel(Enum):
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"


_SEVERITY = {
    LogLevel.DEBUG: SeverityNumber.DEBUG,
    LogLevel.INFO: SeverityNumber.INFO,
    LogLevel.WARNING: SeverityNumber.WARN,
    LogLevel.ERROR: SeverityNumber.ERROR,
}


class LogsManager:
    """
    Structured log records for pipeline events.

    Records go to the OpenTelemetry logger when a logger provider is set up
    and to the `ilpsat.telemetry` python logger otherwise. Either way they
    carry the current trace_id/span_id.
    """

    def __init__(self, config: TelemetryConfig, logger_provider=None):
        self.config = config
        self.hostname = socket.gethostname()
        self.otel_logger_provider = logger_provider
        self.otel_logger = None
        if logger_provider is not None:
            try:
                self.otel_logger = logger_provider.get_logger(config.service_name or "ilpsat")
            except Exception:
                self.otel_logger = None
        self.python_logger = logging.getLogger("ilpsat.telemetry")

    def _get_trace_context(self) -> Dict[str, str]:
        try:
            ctx = get_current_span().get_span_context()
            if ctx and ctx.trace_id != 0:
                return {
                    "trace_id": f"{ctx.trace_id:032x}",
                    "span_id": f"{ctx.span_id:016x}",
                }
        except Exception:
            pass
        return {}

    def log(self, level: LogLevel, message: str, attributes: Optional[Dict[str, Any]] = None) -> None:
        attrs = dict(attributes or {})
        attrs.update(self._get_trace_context())
        attrs["host.name"] = self.hostname

        if self.otel_logger is not None:
            try:
                self.otel_logger.emit(
                    body=message,
                    severity_number=_SEVERITY[level],
                    severity_text=level.value,
                    attributes=attrs,
                )
                return
            except Exception:
                pass
        getattr(self.python_logger, level.value.lower())(message, extra={"otel": attrs})

    def debug(self, msg, attributes=None): self.log(LogLevel.DEBUG, msg, attributes)
    def error(self, msg, attributes=None): self.log(LogLevel.ERROR, msg, attributes)

    def flush(self, timeout_seconds: float = 5.0) -> None:
        try:
            if self.otel_logger_provider is not None and hasattr(self.otel_logger_provider, "force_flush"):
                self.otel_logger_provider.force_flush(int(timeout_seconds * 1000))
        except Exception:
            pass
        for handler in self.python_logger.handlers:
            try:
                handler.flush()
            except Exception:
                pass
