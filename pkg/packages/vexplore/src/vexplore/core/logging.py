"""Centralized logging configuration for vexplore.

This module provides:
- Rich console handler on stderr, sharing one console with the CLI
- Optional rotating file handler (simple, detailed or JSON lines)
- Per-logger level filters
"""

from __future__ import annotations

import json
import logging
from datetime import UTC, datetime
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import TYPE_CHECKING, Any

from rich.console import Console
from rich.logging import RichHandler

if TYPE_CHECKING:
    from vexplore.core.config import Config, LoggingConfig

ROOT_LOGGER = "vexplore"

# Module-level state
_initialized = False
_console: Console | None = None


def get_console() -> Console:
    """Get the shared Rich console instance.

    Logs go to stderr so they never mix with tables or JSON printed on stdout.
    """
    global _console
    if _console is None:
        _console = Console(stderr=True)
    return _console


class VexploreRichHandler(RichHandler):
    """Rich handler bound to the shared console."""

    def __init__(
        self,
        level: int | str = 0,
        show_time: bool = False,
        show_path: bool = False,
        **kwargs: Any,
    ) -> None:
        kwargs.pop("console", None)
        super().__init__(
            level=level,
            console=get_console(),
            show_time=show_time,
            show_path=show_path,
            rich_tracebacks=True,
            tracebacks_show_locals=False,
            markup=False,
            **kwargs,
        )


class JsonFormatter(logging.Formatter):
    """JSON formatter for structured logging to files."""

    def format(self, record: logging.LogRecord) -> str:
        log_data: dict[str, Any] = {
            "timestamp": datetime.now(UTC).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }

        if hasattr(record, "extra") and record.extra:
            log_data["extra"] = record.extra

        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_data)


def setup_logging(config: Config | None = None, *, force: bool = False) -> None:
    """Initialize the logging system.

    Idempotent unless ``force`` is set, which re-applies ``config`` (the CLI
    does this after ``--verbose``/``--quiet``).
    """
    global _initialized

    if _initialized and not force:
        return

    if config is None:
        from vexplore.core.config import Config
        from vexplore.core.exceptions import ConfigError

        try:
            config = Config.load()
        except ConfigError:
            config = Config()

    log_config = config.logging

    root_logger = logging.getLogger(ROOT_LOGGER)
    root_logger.setLevel(getattr(logging, log_config.level))
    for handler in root_logger.handlers:
        handler.close()
    root_logger.handlers.clear()

    if log_config.console_enabled:
        console_handler = VexploreRichHandler(show_time=log_config.console_timestamps)
        console_handler.setLevel(getattr(logging, log_config.console_level))
        console_handler.setFormatter(logging.Formatter("%(message)s"))
        root_logger.addHandler(console_handler)

    if log_config.file_enabled:
        root_logger.addHandler(_file_handler(log_config))

    _apply_logger_filters(log_config)

    _initialized = True
    root_logger.debug("Logging initialized")


def _file_handler(log_config: LoggingConfig) -> logging.Handler:
    log_path = Path(log_config.file_path).expanduser()
    log_path.parent.mkdir(parents=True, exist_ok=True)

    handler = RotatingFileHandler(
        log_path,
        maxBytes=log_config.max_bytes,
        backupCount=log_config.backup_count,
        encoding="utf-8",
    )
    handler.setLevel(getattr(logging, log_config.file_level))

    if log_config.file_format == "json":
        handler.setFormatter(JsonFormatter())
    elif log_config.file_format == "detailed":
        handler.setFormatter(
            logging.Formatter(
                "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s",
                datefmt="%Y-%m-%d %H:%M:%S",
            )
        )
    else:  # simple
        handler.setFormatter(logging.Formatter("%(message)s"))
    return handler


def _apply_logger_filters(log_config: LoggingConfig) -> None:
    for logger_name, level in log_config.filters.items():
        if isinstance(level, str) and level:
            resolved = getattr(logging, level.upper(), logging.WARNING)
            logging.getLogger(logger_name).setLevel(resolved)


def get_logger(name: str) -> logging.Logger:
    """Get a logger under the ``vexplore`` namespace.

    Example:
        logger = get_logger("bench.episode")
        # Creates logger named "vexplore.bench.episode"
    """
    setup_logging()

    if name == ROOT_LOGGER or name.startswith(f"{ROOT_LOGGER}."):
        return logging.getLogger(name)
    return logging.getLogger(f"{ROOT_LOGGER}.{name}")


def reset_logging() -> None:
    """Forget the initialized state; the next ``setup_logging`` call reconfigures."""
    global _initialized
    _initialized = False
