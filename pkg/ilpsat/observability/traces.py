import logging
from contextlib import contextmanager
from typing import Any, Dict, Iterator, Optional

try:
    from opentelemetry import trace
    from opentelemetry.trace import SpanKind, Status, StatusCode
except Exception:
    trace = None
    SpanKind = None
    Status = None
    StatusCode = None

logger = logging.getLogger(__name__)


class DummySpan:
    """Safe no-op span fallback."""
    def set_attribute(self, k, v): pass
    def add_event(self, name, attributes=None): pass
    def record_exception(self, exc): pass
    def set_status(self, status): pass
    def end(self): pass

    def get_span_context(self):
        class Ctx:
            trace_id = 0
            span_id = 0
        return Ctx()


class TracesManager:
    """
    Thin wrapper around OpenTelemetry tracing.

    Spans come from `tracer_provider` when one is given, otherwise from the
    global provider (a no-op one unless something registered a real one).
    """

    def __init__(self, tracer_provider=None):
        self.tracer = None
        try:
            if tracer_provider is not None:
                self.tracer = tracer_provider.get_tracer("ilpsat")
            elif trace is not None:
                self.tracer = trace.get_tracer("ilpsat")
        except Exception:
            logger.debug("Tracer unavailable", exc_info=True)

    @contextmanager
    def start_span(self, name: str, attributes: Optional[Dict[str, Any]] = None) -> Iterator[Any]:
        cm = None
        if self.tracer is not None:
            try:
                cm = self.tracer.start_as_current_span(
                    name,
                    attributes=dict(attributes or {}),
                    kind=SpanKind.INTERNAL,
                    record_exception=False,
                    set_status_on_exception=False,
                )
            except Exception:
                logger.debug("Could not start span %s", name, exc_info=True)
                cm = None

        if cm is None:
            yield DummySpan()
            return
        with cm as span:
            yield span

    def record_exception(self, span: Any, exception: BaseException) -> None:
        try:
            span.record_exception(exception)
            if Status and StatusCode:
                span.set_status(Status(StatusCode.ERROR, str(exception)))
        except Exception:
            logger.debug("Could not record exception on span", exc_info=True)
