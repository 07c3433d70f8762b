import logging
from typing import Any, Dict, Optional

try:
    from opentelemetry import metrics as ot_metrics
except Exception:
    ot_metrics = None

logger = logging.getLogger(__name__)


# ---------------- NO-OP FALLBACK TYPES -------------------

class _NoopCounter:
    def add(self, value: float = 1.0, attributes: Optional[Dict[str, Any]] = None):
        return None


class _NoopHistogram:
    def record(self, value: float, attributes: Optional[Dict[str, Any]] = None):
        return None


class MetricsManager:
    """Counters and histograms with a no-op fallback when no meter is available."""

    def __init__(self, meter_provider=None):
        self.meter_provider = meter_provider
        self._instruments: Dict[str, Any] = {}

    def get_meter(self):
        try:
            if self.meter_provider is not None:
                return self.meter_provider.get_meter("ilpsat")
            if ot_metrics is not None:
                return ot_metrics.get_meter("ilpsat")
        except Exception:
            logger.debug("get_meter failed", exc_info=True)
        return None

    def _get_or_create(self, name: str, inst_type: str, unit: str = ""):
        existing = self._instruments.get(name)
        if existing is not None:
            return existing

        meter = self.get_meter()
        try:
            if meter is not None:
                creator = meter.create_counter if inst_type == "counter" else meter.create_histogram
                inst = creator(name, unit=unit)
                self._instruments[name] = inst
                return inst
        except Exception:
            logger.debug("Failed to create %s '%s'", inst_type, name, exc_info=True)

        noop = _NoopCounter() if inst_type == "counter" else _NoopHistogram()
        self._instruments[name] = noop
        return noop

    def increment_counter(self, name: str, value: float = 1.0, attributes: Optional[Dict[str, Any]] = None) -> None:
        inst = self._get_or_create(name, "counter")
        try:
            inst.add(value, dict(attributes or {}))
        except Exception:
            logger.debug("Error incrementing counter '%s'", name, exc_info=True)

    def record_histogram(self, name: str, value: float, attributes: Optional[Dict[str, Any]] = None, unit: str = "") -> None:
        inst = self._get_or_create(name, "histogram", unit)
        try:
            inst.record(value, dict(attributes or {}))
        except Exception:
            logger.debug("Error recording histogram '%s'", name, exc_info=True)

    def flush(self) -> None:
        try:
            if self.meter_provider is not None and hasattr(self.meter_provider, "force_flush"):
                self.meter_provider.force_flush()
        except Exception:
            logger.debug("Error flushing meter provider", exc_info=True)
