"""Configuration, runtime assembly, HTTP endpoints, and the CLI."""

from .app import AskOptions, AskRequest, create_app
from .config import BACKEND_KINDS, ConfigError, ServiceConfig, load_config
from .runtime import ServiceRuntime, build_backend, build_runtime

__all__ = [
    "AskOptions",
    "AskRequest",
    "BACKEND_KINDS",
    "ConfigError",
    "ServiceConfig",
    "ServiceRuntime",
    "build_backend",
    "build_runtime",
    "create_app",
    "load_config",
]
