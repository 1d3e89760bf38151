# Configuration settings for GeoSpec
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings with environment variable support (prefix GEOSPEC_)."""

    model_config = SettingsConfigDict(
        env_prefix="GEOSPEC_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application settings
    app_name: str = Field(default="GeoSpec")
    app_version: str = Field(default="1.0.0")
    debug: bool = Field(default=False)

    # Parallelism (GEOSPEC_THREADS)
    threads: int = Field(default=1, ge=1)

    # Enumeration
    max_words: int = Field(default=2_000_000, ge=1)
    length_key_decimals: int = Field(default=6, ge=1)
    relator_tolerance: float = Field(default=1e-8, gt=0)

    # Estimators
    default_halfwidth: float = Field(default=0.5, gt=0)
    parry_pollicott_correction: bool = Field(default=False)
    zeta_k_max: int = Field(default=20, ge=0)

    # Output
    output_dir: str = Field(default="out")

    # Logging Configuration
    log_level: str = Field(default="INFO")
    log_file: Optional[str] = Field(default=None)


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get application settings (singleton pattern)."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reload_settings() -> Settings:
    """Reload settings from environment."""
    global _settings
    _settings = Settings()
    return _settings
