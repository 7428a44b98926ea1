"""Process-wide configuration module."""
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


DEFAULT_PRESETS_DIR = Path(__file__).resolve().parent / "scenarios" / "presets"


class Settings(BaseSettings):
    """Centralised runtime settings sourced from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", env_prefix="PURCELL_PL_"
    )

    # Logging
    log_level: str = "INFO"
    log_json: bool = True

    # Outputs
    output_dir: Path = Path("output")
    presets_dir: Path = DEFAULT_PRESETS_DIR

    # Simulation
    default_seed: int = 20080101
    max_workers: int = Field(default=1, ge=1)


settings = Settings()
