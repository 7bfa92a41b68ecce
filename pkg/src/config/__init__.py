"""Конфигурация ST-DAGCN."""

from .settings import RunConfig, build_config, get_settings, load_run_config, reset_settings
from .synthetic import SyntheticSpec

__all__ = [
    "RunConfig",
    "SyntheticSpec",
    "build_config",
    "get_settings",
    "load_run_config",
    "reset_settings",
]
