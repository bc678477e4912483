"""
Configuration Management for encprim

Loads process-level settings from environment variables and an optional
.env file, and run-level pipeline configuration from JSON or YAML files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

import yaml
from pydantic import Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from ..errors import ConfigError


class Settings(BaseSettings):
    """Process settings loaded from ENCPRIM_* environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="ENCPRIM_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Logging
    log_level: str = Field(default="INFO", description="Logging level")
    log_file: Path | None = Field(default=None, description="Log file path")

    # Execution
    jobs: int = Field(default=1, ge=1, description="Worker processes for per-encounter stages")
    default_config: Path | None = Field(
        default=None, description="Pipeline config used when --config is not given"
    )


def load_settings(env_file: str | None = None) -> Settings:
    """Load settings from environment and optional env file."""
    if env_file:
        return Settings(_env_file=env_file)
    return Settings()


def read_config_file(path: Path | str) -> dict[str, Any]:
    """
    Read a JSON or YAML configuration file into a dictionary.

    JSON documents are valid YAML, so a single loader serves both.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Configuration file not found: {path}")

    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"Failed to parse configuration '{path}': {e}") from e

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"Configuration '{path}' must be a mapping, got {type(data).__name__}")
    return data


def format_validation_error(error: ValidationError) -> str:
    """Flatten a pydantic ValidationError into one readable line."""
    parts = []
    for item in error.errors():
        loc = ".".join(str(p) for p in item["loc"]) or "<root>"
        parts.append(f"{loc}: {item['msg']}")
    return "; ".join(parts)
