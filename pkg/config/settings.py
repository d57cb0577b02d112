import os
import environ
from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent.parent
env = environ.Env()
environ.Env.read_env(os.path.join(BASE_DIR, ".env"))

SECRET_KEY = env("SECRET_KEY", default="hyperwander-local-only")
DEBUG = env.bool("DJANGO_DEBUG", default=False)
ALLOWED_HOSTS = []

INSTALLED_APPS = [
    "hyperwander",
]

# the reasoner keeps everything in files; no database is configured
DATABASES = {}

TIME_ZONE = "UTC"
USE_TZ = True

FIXTURES_DIR = BASE_DIR / "fixtures"

# defaults for the management commands; library code takes explicit parameters
HYPERWANDER = {
    "TIMEOUT_SECONDS": env.float("HYPERWANDER_TIMEOUT", default=30.0),
    "MAX_TERM_DEPTH": env.int("HYPERWANDER_MAX_DEPTH", default=5),
    "MAX_BRANCH_ATOMS": env.int("HYPERWANDER_MAX_ATOMS", default=100_000),
    "MAX_STEPS": env.int("HYPERWANDER_MAX_STEPS", default=None),
    "SEED": env.int("HYPERWANDER_SEED", default=42),
    "ROUNDS": env.int("HYPERWANDER_ROUNDS", default=10),
    "CLUSTER_DIVISOR": env.int("HYPERWANDER_CLUSTER_DIVISOR", default=4),
    "SIM_LOW": env.float("HYPERWANDER_SIM_LOW", default=0.4),
    "SIM_HIGH": env.float("HYPERWANDER_SIM_HIGH", default=1.0),
    "EXPAND_THRESHOLD": env.float("HYPERWANDER_EXPAND", default=0.6),
    "SINE_TOLERANCE": env.float("HYPERWANDER_SINE_TOLERANCE", default=1.5),
    "SINE_DEPTH": env.int("HYPERWANDER_SINE_DEPTH", default=2),
    "MAX_AXIOMS": env.int("HYPERWANDER_MAX_AXIOMS", default=2000),
}

TELEMETRY = {
    "ENABLED": env.bool("HYPERWANDER_TELEMETRY", default=False),
    "SERVICE_NAME": env("OTEL_SERVICE_NAME", default="hyperwander"),
    "ENDPOINT": env("OTEL_EXPORTER_OTLP_ENDPOINT", default="http://localhost:4317"),
}

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(asctime)s %(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "plain"},
    },
    "loggers": {
        "hyperwander": {
            "handlers": ["console"],
            "level": env("LOG_LEVEL", default="INFO"),
            "propagate": False,
        },
    },
}
