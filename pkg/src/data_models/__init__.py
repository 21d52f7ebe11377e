"""Data models package.

This package contains the option, result and report models used across the application.
"""

from src.data_models.options import (
    CoefficientMode,
    EngineMode,
    LhoMode,
    MultiOptions,
    Ordering,
    PrintStyle,
    UniOptions,
    parse_enum,
)
from src.data_models.results import (
    EXIT_CODES,
    EXIT_ERROR,
    EXIT_NOT_FOUND,
    EXIT_OK,
    EXIT_USAGE,
    AdeOutcome,
    AdeReport,
    AdeResult,
    AdeStatus,
    FileRun,
    NotFound,
    TermReport,
    combined_exit_code,
)
from src.data_models.stats import GroebnerStats

__all__ = [
    "EXIT_CODES",
    "EXIT_ERROR",
    "EXIT_NOT_FOUND",
    "EXIT_OK",
    "EXIT_USAGE",
    "AdeOutcome",
    "AdeReport",
    "AdeResult",
    "AdeStatus",
    "CoefficientMode",
    "EngineMode",
    "FileRun",
    "GroebnerStats",
    "LhoMode",
    "MultiOptions",
    "NotFound",
    "Ordering",
    "PrintStyle",
    "TermReport",
    "combined_exit_code",
    "UniOptions",
    "parse_enum",
]
