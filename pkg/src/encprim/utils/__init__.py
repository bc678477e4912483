"""
encprim Utilities Module

Shared settings, logging and seeding helpers.
"""

from .config import Settings, format_validation_error, load_settings, read_config_file
from .logging import get_logger, setup_logging
from .seeding import child_seeds, derive_seed

__all__ = [
    "Settings",
    "load_settings",
    "read_config_file",
    "format_validation_error",
    "setup_logging",
    "get_logger",
    "derive_seed",
    "child_seeds",
]
