"""
Stage instrumentation for the pipeline.

`traced_stage("presolve")` wraps a function in a span `ilpsat.presolve` and
records a `presolve.calls` counter and a `presolve.duration_ms` histogram,
both tagged with the outcome. Telemetry problems never reach the caller;
the wrapped function's own exceptions are re-raised unchanged.
"""

import functools
import logging
import time
from typing import Any, Callable, Dict, Optional, TypeVar

from ilpsat.observability.collector import TelemetryCollector, get_telemetry

logger = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable[..., Any])


def _safe(action: Callable[[], None], what: str) -> None:
    try:
        action()
    except Exception:
        logger.debug("Telemetry %s failed", what, exc_info=True)


def _resolve() -> Optional[TelemetryCollector]:
    try:
        return get_telemetry()
    except Exception:
        logger.debug("Telemetry unavailable", exc_info=True)
        return None


def _execute_with_telemetry(callable_fn: Callable[[], Any], tele: TelemetryCollector, stage: str, base_attrs: Dict[str, Any]) -> Any:
    span_name = f"ilpsat.{stage}"
    counter_name = f"{stage}.calls"
    histogram_name = f"{stage}.duration_ms"

    start = time.perf_counter()
    with tele.traces.start_span(span_name, base_attrs) as span:
        try:
            result = callable_fn()
        except Exception as e:
            duration = (time.perf_counter() - start) * 1000
            attrs = {**base_attrs, "outcome": "error", "exception.type": type(e).__name__}
            _safe(lambda: tele.traces.record_exception(span, e), "span error")
            _safe(lambda: tele.metrics.increment_counter(counter_name, 1, attrs), "counter")
            _safe(lambda: tele.metrics.record_histogram(histogram_name, duration, attrs, unit="ms"), "histogram")
            _safe(lambda: tele.logs.error(
                f"Error in {span_name}",
                {**attrs, "duration_ms": duration, "exception.message": str(e)},
            ), "log")
            raise

        duration = (time.perf_counter() - start) * 1000
        attrs = {**base_attrs, "outcome": "success"}
        _safe(lambda: span.set_attribute("duration_ms", duration), "span attribute")
        _safe(lambda: tele.metrics.increment_counter(counter_name, 1, attrs), "counter")
        _safe(lambda: tele.metrics.record_histogram(histogram_name, duration, attrs, unit="ms"), "histogram")
        _safe(lambda: tele.logs.debug(f"{span_name} finished", {**attrs, "duration_ms": duration}), "log")
        return result


def traced_stage(stage: str) -> Callable[[F], F]:
    def dec(fn: F) -> F:
        base_attrs = {
            "code.function": fn.__qualname__,
            "code.module": fn.__module__,
            "ilpsat.stage": stage,
        }

        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            tele = _resolve()
            if tele is None:
                return fn(*args, **kwargs)
            return _execute_with_telemetry(lambda: fn(*args, **kwargs), tele, stage, base_attrs)

        return wrapper  # type: ignore[return-value]
    return dec


def record_presolve_report(report: Any) -> None:
    """Publish the reduction counts of one presolve run as counters."""
    tele = _resolve()
    if tele is None:
        return
    for name, value in (
        ("presolve.fixed_vars", report.fixed_vars),
        ("presolve.aggregated_vars", report.aggregated),
        ("presolve.removed_constraints", report.removed_constraints),
    ):
        _safe(lambda: tele.metrics.increment_counter(name, value), "counter")
