"""Core ambient stack: configuration, logging and exceptions."""

from vexplore.core.exceptions import VexploreError
from vexplore.core.logging import get_console, get_logger, setup_logging

__all__ = [
    "VexploreError",
    "get_console",
    "get_logger",
    "setup_logging",
]
