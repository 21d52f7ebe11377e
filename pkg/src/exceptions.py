"""Exceptions raised by the dalg library.

Every error the engines can raise derives from DalgError, so callers that only
care about "it failed" can catch a single class.
"""

from typing import Any, Optional


class DalgError(Exception):
    """Base class for all dalg errors."""

    pass


class UsageError(DalgError):
    """Exception raised when an operation is called outside its contract."""

    pass


class ParseError(UsageError):
    """Exception raised for syntax errors in input text."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None) -> None:
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class UnsupportedInputError(DalgError):
    """Exception raised for inputs the construction is not defined for (e.g. order-0 ADEs)."""

    pass


class DegenerateExpressionError(DalgError):
    """Exception raised when a rational expression has a vanishing denominator."""

    pass


class NoAdeFoundError(DalgError):
    """Exception raised when a univariate elimination ideal turns out to be trivial."""

    pass


class InternalError(DalgError):
    """Exception raised when an internal invariant is broken."""

    pass


class BudgetExceededError(DalgError):
    """Exception raised when a Gröbner computation exceeds its resource budget.

    The statistics collected up to the breach are kept in ``stats``.
    """

    def __init__(self, message: str, stats: Optional[dict[str, Any]] = None) -> None:
        self.stats = dict(stats or {})
        super().__init__(message)
