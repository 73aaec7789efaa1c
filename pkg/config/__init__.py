"""
Configuration management for co-presence runs.
"""

from .settings import (
    DEFAULT_CONFIG_PATH,
    ENV_PREFIX,
    BridgeConfig,
    ConfigError,
    RunConfig,
    env_overrides,
    load_config,
)

__all__ = [
    'DEFAULT_CONFIG_PATH',
    'ENV_PREFIX',
    'BridgeConfig',
    'ConfigError',
    'RunConfig',
    'env_overrides',
    'load_config',
]
