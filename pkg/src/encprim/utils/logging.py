"""
Logging Configuration for encprim

Rich console output for the CLI plus an optional plain-text log file.
Only the ``encprim`` logger follows the configured level; third-party
loggers stay at WARNING.
"""

from __future__ import annotations

import logging
from pathlib import Path

from rich.console import Console
from rich.logging import RichHandler

PACKAGE_LOGGER = "encprim"
FILE_FORMAT = "%(asctime)s | %(name)s | %(levelname)s | %(message)s"

_console = Console(stderr=True)
_configured = False


def setup_logging(
    level: str = "INFO",
    log_file: Path | None = None,
) -> None:
    """Configure logging for the application.

    Handlers are attached once per process; later calls only adjust the
    package level, so repeated CLI invocations in one interpreter do not
    duplicate output.
    """
    global _configured

    package_logger = logging.getLogger(PACKAGE_LOGGER)
    package_logger.setLevel(getattr(logging, level.upper(), logging.INFO))

    if _configured:
        return

    root_logger = logging.getLogger()
    root_logger.setLevel(logging.WARNING)

    console_handler = RichHandler(
        console=_console,
        show_time=False,
        show_path=False,
        rich_tracebacks=True,
    )
    root_logger.addHandler(console_handler)

    if log_file:
        log_file = Path(log_file)
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(logging.Formatter(FILE_FORMAT))
        root_logger.addHandler(file_handler)

    _configured = True


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance for the given name."""
    return logging.getLogger(name)
