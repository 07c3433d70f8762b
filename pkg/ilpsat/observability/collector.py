import logging
import threading
from typing import Any, Dict, Optional

from ilpsat.observability.config import TelemetryConfig
from ilpsat.observability.logs import LogsManager
from ilpsat.observability.metrics import MetricsManager
from ilpsat.observability.otel_setup import setup_otel
from ilpsat.observability.traces import TracesManager

logger = logging.getLogger(__name__)


class TelemetryCollector:
    """
    Bundles the traces, metrics and logs managers of one process.

    `providers` may be passed in directly (tests hand in providers wired
    to in-memory exporters); otherwise they are built from `config`.
    """

    def __init__(self, config: Optional[TelemetryConfig] = None, providers: Optional[Dict[str, Any]] = None):
        self.config = config or TelemetryConfig()
        if providers is None:
            providers = setup_otel(self.config) if self.config.enabled else {}

        self.tracer_provider = providers.get("tracer_provider")
        self.meter_provider = providers.get("meter_provider")
        self.logger_provider = providers.get("logger_provider")

        self._traces = TracesManager(self.tracer_provider)
        self._metrics = MetricsManager(self.meter_provider)
        self._logs = LogsManager(self.config, logger_provider=self.logger_provider)

    # ---------------- PROPERTIES ----------------
    @property
    def traces(self) -> TracesManager:
        return self._traces

    @property
    def metrics(self) -> MetricsManager:
        return self._metrics

    @property
    def logs(self) -> LogsManager:
        return self._logs

    # ---------------- LIFECYCLE ----------------
    def flush(self, timeout_ms: int = 30000) -> bool:
        ok = True
        try:
            if self.tracer_provider is not None:
                self.tracer_provider.force_flush(timeout_ms)
        except Exception:
            logger.debug("Tracer flush failed", exc_info=True)
            ok = False
        self._metrics.flush()
        self._logs.flush(timeout_ms / 1000.0)
        return ok

    def shutdown(self) -> None:
        self.flush()
        for provider in (self.tracer_provider, self.meter_provider, self.logger_provider):
            try:
                if provider is not None:
                    provider.shutdown()
            except Exception:
                logger.debug("Provider shutdown failed", exc_info=True)


_telemetry: Optional[TelemetryCollector] = None
_lock = threading.Lock()


def get_telemetry() -> TelemetryCollector:
    """Process-wide collector, created from the environment on first use."""
    global _telemetry
    with _lock:
        if _telemetry is None:
            _telemetry = TelemetryCollector()
        return _telemetry


def configure_telemetry(config: Optional[TelemetryConfig] = None, providers: Optional[Dict[str, Any]] = None) -> TelemetryCollector:
    """Replace the process-wide collector; the previous one is shut down."""
    global _telemetry
    collector = TelemetryCollector(config, providers)
    with _lock:
        previous, _telemetry = _telemetry, collector
    if previous is not None:
        previous.shutdown()
    return collector
