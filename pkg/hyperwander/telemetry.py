import logging

from opentelemetry import metrics, trace
from opentelemetry.exporter.otlp.proto.grpc._log_exporter import OTLPLogExporter
from opentelemetry.exporter.otlp.proto.grpc.metric_exporter import OTLPMetricExporter
from opentelemetry.exporter.otlp.proto.grpc.trace_exporter import OTLPSpanExporter
from opentelemetry.sdk._logs import LoggerProvider, LoggingHandler
from opentelemetry.sdk._logs.export import BatchLogRecordProcessor
from opentelemetry.sdk.metrics import MeterProvider
from opentelemetry.sdk.metrics.export import PeriodicExportingMetricReader
from opentelemetry.sdk.resources import SERVICE_NAME, Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor

log = logging.getLogger(__name__)


class Telemetry:
    """
    OTLP exporters for traces, metrics and logs of long reasoning runs.

    A wander or copa run can take minutes; spans from `hyperwander.instrument`
    show where the time went (selection, saturation, clustering).
    """

    _installed = False

    def __init__(
        self,
        service_name: str | None = None,
        collector_endpoint: str | None = None,
        metric_interval_millis: int = 10_000,
    ):
        self.service_name = service_name or "hyperwander"
        self.resource = Resource.create({SERVICE_NAME: self.service_name})
        self.collector_endpoint = collector_endpoint or "http://localhost:4317"
        self.metric_interval_millis = metric_interval_millis

    def configure_tracer(self):
        tracer_provider = TracerProvider(resource=self.resource)
        tracer_provider.add_span_processor(
            BatchSpanProcessor(
                OTLPSpanExporter(endpoint=self.collector_endpoint, insecure=True)
            )
        )

        trace.set_tracer_provider(tracer_provider)

    def configure_meter(self):
        metric_reader = PeriodicExportingMetricReader(
            OTLPMetricExporter(endpoint=self.collector_endpoint, insecure=True),
            export_interval_millis=self.metric_interval_millis,
        )
        meter_provider = MeterProvider(
            resource=self.resource, metric_readers=[metric_reader]
        )

        metrics.set_meter_provider(meter_provider)

    def configure_logger(self):
        logger_provider = LoggerProvider(resource=self.resource)
        logger_provider.add_log_record_processor(
            BatchLogRecordProcessor(
                OTLPLogExporter(endpoint=self.collector_endpoint, insecure=True)
            )
        )

        handler = LoggingHandler(level=logging.NOTSET, logger_provider=logger_provider)
        logging.getLogger("hyperwander").addHandler(handler)

    def setup(self):
        # providers can only be set once per process
        if Telemetry._installed:
            return

        self.configure_tracer()
        self.configure_meter()
        self.configure_logger()
        Telemetry._installed = True

        log.info(
            "telemetry exporting to %s as '%s'",
            self.collector_endpoint,
            self.service_name,
        )
