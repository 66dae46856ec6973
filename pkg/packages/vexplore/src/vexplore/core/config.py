"""Configuration management for vexplore."""

from pathlib import Path
from typing import Any, Literal

import toml
from pydantic import BaseModel, Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from vexplore.core.exceptions import ConfigError
from vexplore.models.run import RunConfig, merge_run_config


class EnvSettings(BaseSettings):
    """Overrides read from ``VEXPLORE_*`` environment variables."""

    model_config = SettingsConfigDict(env_prefix="VEXPLORE_")

    config_dir: Path | None = None


def get_config_dir() -> Path:
    """Get the configuration directory path."""
    override = EnvSettings().config_dir
    if override is not None:
        return override.expanduser()
    return Path.home() / ".config" / "vexplore"


def get_config_path() -> Path:
    """Get the configuration file path."""
    return get_config_dir() / "config.toml"


def get_log_path() -> Path:
    """Get the default log file path."""
    return get_config_dir() / "logs" / "vexplore.log"


class GeneralConfig(BaseModel):
    """General configuration."""

    output_dir: str = ""
    scenes_dir: str = ""
    workers: int = 1

    def model_post_init(self, __context: Any) -> None:
        if not self.output_dir:
            self.output_dir = str(get_config_dir() / "runs")
        if not self.scenes_dir:
            self.scenes_dir = str(get_config_dir() / "scenes")


class LoggingConfig(BaseModel):
    """Logging configuration."""

    # Global log level
    level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "INFO"

    # Console settings (diagnostic output to stderr)
    console_enabled: bool = True
    console_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "INFO"
    console_timestamps: bool = False

    # File settings
    file_enabled: bool = False
    file_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "DEBUG"
    file_path: str = ""
    max_bytes: int = 10 * 1024 * 1024  # 10MB
    backup_count: int = 5
    file_format: Literal["simple", "detailed", "json"] = "detailed"

    # Per-logger levels, e.g. {"vexplore.planning": "DEBUG"}
    filters: dict[str, str] = {}

    def model_post_init(self, __context: Any) -> None:
        if not self.file_path:
            self.file_path = str(get_log_path())


class Config(BaseModel):
    """Application configuration."""

    general: GeneralConfig = Field(default_factory=GeneralConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)
    defaults: RunConfig = Field(default_factory=RunConfig)

    @classmethod
    def load(cls) -> "Config":
        """Load configuration from file."""
        config_path = get_config_path()
        if not config_path.exists():
            return cls()
        try:
            data = toml.load(config_path)
            return cls(**data)
        except (toml.TomlDecodeError, ValidationError) as e:
            raise ConfigError(f"invalid config file {config_path}: {e}") from e

    def save(self) -> None:
        """Save configuration to file."""
        config_path = get_config_path()
        config_path.parent.mkdir(parents=True, exist_ok=True)
        data = self.model_dump(mode="json", exclude_none=True)
        with open(config_path, "w") as f:
            toml.dump(data, f)


def init_config() -> Config:
    """Initialize configuration with defaults."""
    config = Config()
    config.save()
    return config


def load_run_config(path: Path, base: RunConfig | None = None) -> RunConfig:
    """Read a JSON run-config file and apply it on top of ``base``."""
    base = base or RunConfig()
    try:
        overrides = RunConfig.model_validate_json(Path(path).read_text()).model_dump(
            mode="json", exclude_unset=True
        )
    except OSError as e:
        raise ConfigError(f"cannot read run config {path}: {e}") from e
    except ValidationError as e:
        raise ConfigError(f"invalid run config {path}: {e}") from e
    return merge_run_config(base, overrides)
