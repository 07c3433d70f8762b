import logging
import sys
from typing import Any, Dict

from opentelemetry import metrics, trace
from opentelemetry._logs import set_logger_provider
from opentelemetry.exporter.otlp.proto.http._log_exporter import OTLPLogExporter
from opentelemetry.exporter.otlp.proto.http.metric_exporter import OTLPMetricExporter
from opentelemetry.exporter.otlp.proto.http.trace_exporter import OTLPSpanExporter
from opentelemetry.sdk._logs import LoggerProvider
from opentelemetry.sdk._logs.export import BatchLogRecordProcessor, ConsoleLogExporter
from opentelemetry.sdk.metrics import MeterProvider
from opentelemetry.sdk.metrics.export import ConsoleMetricExporter, PeriodicExportingMetricReader
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import SpanLimits, TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor, ConsoleSpanExporter

from ilpsat.observability.config import TelemetryConfig

logger = logging.getLogger(__name__)


def _endpoint(config: TelemetryConfig, signal: str) -> str:
    return f"{config.collector_endpoint.rstrip('/')}/v1/{signal}"


def setup_otel(config: TelemetryConfig, set_global: bool = True) -> Dict[str, Any]:
    """
    Build the tracer, meter and logger providers requested by `config`.

    Exporters: OTLP over HTTP when a collector endpoint is set, console
    (stderr) when `console_export` is on, none otherwise. Providers are
    registered globally only when `set_global` is true; a failing signal is
    logged and left as None.
    """
    providers: Dict[str, Any] = {
        "tracer_provider": None,
        "meter_provider": None,
        "logger_provider": None,
    }

    resource = Resource.create({
        "service.name": config.service_name,
        **(config.resource_attributes or {}),
    })

    # =========================================================
    # TRACES
    # =========================================================
    if config.enable_traces:
        try:
            tracer_provider = TracerProvider(
                resource=resource,
                span_limits=SpanLimits(max_attributes=config.max_span_attributes),
            )
            span_exporter = None
            if config.collector_endpoint:
                span_exporter = OTLPSpanExporter(
                    endpoint=_endpoint(config, "traces"),
                    headers=config.headers or {},
                )
            elif config.console_export:
                span_exporter = ConsoleSpanExporter(out=sys.stderr)

            if span_exporter is not None:
                tracer_provider.add_span_processor(
                    BatchSpanProcessor(
                        span_exporter,
                        schedule_delay_millis=config.export_interval_ms,
                        max_export_batch_size=config.max_export_batch_size,
                        max_queue_size=config.max_queue_size,
                    )
                )
            if set_global:
                trace.set_tracer_provider(tracer_provider)
            providers["tracer_provider"] = tracer_provider
        except Exception:
            logger.debug("Trace setup failed", exc_info=True)

    # =========================================================
    # METRICS
    # =========================================================
    if config.enable_metrics:
        try:
            readers = []
            if config.collector_endpoint:
                readers.append(PeriodicExportingMetricReader(
                    exporter=OTLPMetricExporter(
                        endpoint=_endpoint(config, "metrics"),
                        headers=config.headers or {},
                    ),
                    export_interval_millis=config.export_interval_ms,
                ))
            elif config.console_export:
                readers.append(PeriodicExportingMetricReader(
                    exporter=ConsoleMetricExporter(out=sys.stderr),
                    export_interval_millis=config.export_interval_ms,
                ))

            meter_provider = MeterProvider(resource=resource, metric_readers=readers)
            if set_global:
                metrics.set_meter_provider(meter_provider)
            providers["meter_provider"] = meter_provider
        except Exception:
            logger.debug("Metric setup failed", exc_info=True)

    # =========================================================
    # LOGS
    # =========================================================
    if config.enable_logs:
        try:
            logger_provider = LoggerProvider(resource=resource)
            log_exporter = None
            if config.collector_endpoint:
                log_exporter = OTLPLogExporter(
                    endpoint=_endpoint(config, "logs"),
                    headers=config.headers or {},
                )
            elif config.console_export:
                log_exporter = ConsoleLogExporter(out=sys.stderr)

            if log_exporter is not None:
                logger_provider.add_log_record_processor(BatchLogRecordProcessor(log_exporter))
            if set_global:
                set_logger_provider(logger_provider)
            providers["logger_provider"] = logger_provider
        except Exception:
            logger.debug("Log setup failed", exc_info=True)

    return providers
