from django.apps import AppConfig
from django.conf import settings


class HyperwanderConfig(AppConfig):
    name = "hyperwander"
    verbose_name = "Hyper mind wandering"

    def ready(self):
        # exporters are only wired up on request; without them the otel api stays a no-op
        telemetry = getattr(settings, "TELEMETRY", {})
        if telemetry.get("ENABLED"):
            from hyperwander.telemetry import Telemetry

            Telemetry(
                service_name=telemetry.get("SERVICE_NAME"),
                collector_endpoint=telemetry.get("ENDPOINT"),
            ).setup()
