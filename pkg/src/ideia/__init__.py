"""ideia — editorial ideation engine.

Continuously ingests trending search terms, ranks them with recency decay,
generates headline/summary suggestions through pluggable generative
providers, and manages the pitch -> suggestion -> draft editorial workflow
over a durable store, an HTTP API, and an operator CLI.
"""

__version__ = "0.1.0"

from .clock import SimulatedClock, SystemClock, parse_rfc3339, to_rfc3339
from .config import ConfigError, RuntimeConfig, load_config

__all__ = [
    "ConfigError",
    "RuntimeConfig",
    "SimulatedClock",
    "SystemClock",
    "load_config",
    "parse_rfc3339",
    "to_rfc3339",
    "__version__",
]
