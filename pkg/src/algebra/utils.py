"""Utility functions for engine configuration (budgets, Gröbner backend, logging level)."""

import logging
import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

# Load environment variables
load_dotenv()

# Gröbner backends
NATIVE = "native"
SYMPY_BUCHBERGER = "buchberger"
SYMPY_F5B = "f5b"
GROEBNER_METHODS = (NATIVE, SYMPY_BUCHBERGER, SYMPY_F5B)

DEFAULT_MAX_PAIRS = 1_000_000


class GroebnerBudget(BaseModel):
    """Resource limits applied to a single Gröbner basis computation."""

    max_pairs: int = Field(
        DEFAULT_MAX_PAIRS, description="Maximum number of S-pairs reduced", gt=0, examples=[10_000, 1_000_000]
    )
    time_limit_s: float = Field(0.0, description="Wall-clock limit in seconds, 0 disables it", ge=0, examples=[60.0])
    max_coeff_bits: int = Field(
        0, description="Maximum coefficient bit-size of a basis element, 0 disables it", ge=0, examples=[4096]
    )
    method: str = Field(NATIVE, description="Gröbner backend", examples=list(GROEBNER_METHODS))
    verify: bool = Field(True, description="Re-check the Buchberger criterion on every returned basis")

    @field_validator("method")
    @classmethod
    def validate_method(cls, value: str) -> str:
        """Validate that the backend name is known."""
        if value not in GROEBNER_METHODS:
            raise ValueError(f"Unsupported Gröbner method: {value}")
        return value


_budget: Optional[GroebnerBudget] = None


def _budget_from_env() -> GroebnerBudget:
    """Read the budget from DALG_* environment variables."""
    try:
        return GroebnerBudget(
            max_pairs=int(os.getenv("DALG_MAX_PAIRS", str(DEFAULT_MAX_PAIRS))),
            time_limit_s=float(os.getenv("DALG_TIME_LIMIT_S", "0")),
            max_coeff_bits=int(os.getenv("DALG_MAX_COEFF_BITS", "0")),
            method=os.getenv("DALG_GROEBNER_METHOD", NATIVE),
            verify=os.getenv("DALG_VERIFY_GROEBNER", "1").lower() not in ("0", "false", "no"),
        )
    except ValueError as e:
        raise ValueError(f"Invalid DALG_* budget configuration: {str(e)}")


def get_budget() -> GroebnerBudget:
    """Get the active Gröbner budget.

    Returns:
        GroebnerBudget: overrides installed by configure_budget, else the environment defaults
    """
    global _budget
    if _budget is None:
        _budget = _budget_from_env()
    return _budget


def configure_budget(
    max_pairs: Optional[int] = None,
    time_limit_s: Optional[float] = None,
    max_coeff_bits: Optional[int] = None,
    method: Optional[str] = None,
) -> GroebnerBudget:
    """Install budget overrides on top of the environment defaults.

    Args:
        max_pairs: S-pair cap
        time_limit_s: wall-clock cap in seconds (0 disables it)
        max_coeff_bits: coefficient bit-size cap (0 disables it)
        method: Gröbner backend name

    Returns:
        The budget now in effect

    Raises:
        ValueError: If a value is out of range or the method is unknown
    """
    global _budget
    overrides = {
        "max_pairs": max_pairs,
        "time_limit_s": time_limit_s,
        "max_coeff_bits": max_coeff_bits,
        "method": method,
    }
    current = _budget_from_env().model_dump()
    current.update({key: value for key, value in overrides.items() if value is not None})
    try:
        _budget = GroebnerBudget(**current)
    except Exception as e:
        raise ValueError(f"Invalid budget: {str(e)}")
    return _budget


def reset_budget() -> None:
    """Drop installed overrides; the next get_budget() re-reads the environment."""
    global _budget
    _budget = None


def get_log_level(verbosity: int = 0) -> int:
    """Resolve the logging level from -v flags, falling back to DALG_LOG_LEVEL.

    Args:
        verbosity: number of -v flags given on the command line

    Returns:
        A logging level constant
    """
    if verbosity >= 2:
        return logging.DEBUG
    if verbosity == 1:
        return logging.INFO
    name = os.getenv("DALG_LOG_LEVEL", "WARNING").upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        raise ValueError(f"Unsupported log level: {name}")
    return level
