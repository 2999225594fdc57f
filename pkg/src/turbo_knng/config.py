"""Configuration management for turbo_knng.

This module handles all configuration via Pydantic settings with environment variable
support and validation. Configuration can be loaded from .env files or environment;
every variable uses the ``KNNG_`` prefix (for example ``KNNG_LOG_LEVEL=INFO``).
"""

from typing import Literal

from pydantic import Field, ValidationInfo, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables.

    The numeric fields are the defaults that command-line flags fall back to.

    Attributes:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL).
        log_format: Renderer for log lines on stderr.
        default_k: Neighbors per node.
        max_candidates: Cap on each node's new and old candidate lists.
        termination_delta: Fraction of n*k changes below which descent stops.
        max_iterations: Hard cap on descent iterations.
        reorder_after_iteration: Iteration after which the greedy reordering runs.
        window_size: Window length for cluster-fraction curves.
        brute_force_max_n: Largest dataset the exact oracle accepts.
    """

    model_config = SettingsConfigDict(
        env_prefix="KNNG_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="WARNING",
        description="Logging level",
    )
    log_format: Literal["console", "json"] = Field(
        default="console",
        description="Log renderer (human-readable console or JSON lines)",
    )

    # Descent defaults
    default_k: int = Field(
        default=20,
        description="Neighbors per node",
        ge=2,
        le=1000,
    )
    max_candidates: int = Field(
        default=50,
        description="Cap on each node's sampled candidate lists",
        ge=2,
        le=10000,
    )
    termination_delta: float = Field(
        default=0.001,
        description="Stop when changes fall below this fraction of n*k",
        gt=0.0,
        lt=1.0,
    )
    max_iterations: int = Field(
        default=30,
        description="Maximum number of descent iterations",
        ge=0,
        le=1000,
    )
    reorder_after_iteration: int = Field(
        default=1,
        description="Iteration after which the greedy reordering runs",
        ge=1,
    )

    # Evaluation
    window_size: int = Field(
        default=2000,
        description="Window length for cluster-fraction curves",
        ge=1,
    )
    brute_force_max_n: int = Field(
        default=100_000,
        description="Largest n the brute-force oracle accepts",
        ge=2,
    )

    @field_validator("max_candidates")
    @classmethod
    def validate_max_candidates(cls, v: int, info: ValidationInfo) -> int:
        """Validate that the candidate cap is at least k.

        Args:
            v: Candidate cap value.
            info: Field validation info containing other field values.

        Returns:
            Validated candidate cap.

        Raises:
            ValueError: If the cap is smaller than default_k.
        """
        k = info.data.get("default_k")
        if k is not None and v < k:
            raise ValueError(f"max_candidates ({v}) must be at least default_k ({k})")
        return v


# Global settings instance
_settings: Settings | None = None


def get_settings() -> Settings:
    """Get the global settings instance.

    Returns:
        The global Settings instance.

    Note:
        Settings are loaded once and cached. To reload, use reload_settings().
    """
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reload_settings() -> Settings:
    """Reload settings from environment.

    Returns:
        Newly loaded Settings instance.
    """
    global _settings
    _settings = Settings()
    return _settings
