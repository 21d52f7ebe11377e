"""Engine option definitions.

This module contains the enums and option models accepted by the engines.
"""

from enum import Enum, auto
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator


class LhoMode(Enum):
    """Which univariate pipeline to run."""

    AUTO = auto()  # l.h.o. path when every input is l.h.o., separant path otherwise
    FORCE_LHO = auto()  # differentiate non-l.h.o. inputs first, then run the l.h.o. path
    FORCE_NONLHO = auto()  # always saturate by the separants


class Ordering(Enum):
    """Elimination strategy."""

    LEX = auto()  # pure lex, eliminated variables above kept ones
    LEXDEG = auto()  # block order, degrevlex inside each block


class CoefficientMode(Enum):
    """Where independent variables and parameters live during elimination."""

    POLYNOMIAL = auto()  # lowest-ranked ring variables, never eliminated
    FRACTION = auto()  # coefficient field Q(x, parameters)


class EngineMode(Enum):
    """Engine selected by a CLI subcommand."""

    UNI = auto()  # several univariate inputs
    MULTI = auto()  # partial or mixed inputs, θ-ranking search
    UNARY = auto()  # a single univariate input


class PrintStyle(Enum):
    """Notation used by the printer."""

    ASCII = auto()
    LATEX = auto()


def parse_enum(enum_cls: type, value: str) -> Enum:
    """Map a lower-case option value such as ``lexdeg`` to its enum member.

    Raises:
        ValueError: If the value names no member
    """
    try:
        return enum_cls[value.strip().upper().replace("-", "_")]
    except KeyError:
        choices = ", ".join(member.name.lower() for member in enum_cls)
        raise ValueError(f"Unsupported value '{value}', expected one of: {choices}")


class UniOptions(BaseModel):
    """Options of the univariate engine."""

    lho_mode: LhoMode = Field(LhoMode.AUTO, description="Pipeline selection")
    ordering: Optional[Ordering] = Field(
        None, description="Elimination strategy; unset picks lex on the l.h.o. path and lexdeg otherwise"
    )
    lhoplex: bool = Field(False, description="Use pure lex on the separant path", examples=[False, True])
    separants_zeros: bool = Field(
        False, description="Saturate by the denominators only, keeping separant components", examples=[False, True]
    )
    diff_first: bool = Field(
        False, description="Replace non-l.h.o. inputs by their total derivatives", examples=[False, True]
    )
    coefficients: CoefficientMode = Field(CoefficientMode.POLYNOMIAL, description="Coefficient handling")

    @model_validator(mode="after")
    def validate_path(self) -> "UniOptions":
        """Reject contradictory path flags."""
        if self.diff_first and self.lho_mode is LhoMode.FORCE_NONLHO:
            raise ValueError("diff_first cannot be combined with the forced separant path")
        if self.lhoplex and self.ordering is Ordering.LEXDEG:
            raise ValueError("lhoplex asks for lex, but ordering=lexdeg was given")
        return self

    def echo(self) -> dict:
        """Options as plain JSON values."""
        return {
            "lho": self.lho_mode.name.lower(),
            "ordering": self.ordering.name.lower() if self.ordering else None,
            "lhoplex": self.lhoplex,
            "separants_zeros": self.separants_zeros,
            "diff_first": self.diff_first,
            "coefficients": self.coefficients.name.lower(),
        }


class MultiOptions(BaseModel):
    """Options of the multivariate engine."""

    maxord: Optional[Tuple[int, ...]] = Field(
        None, description="Componentwise order bound overriding the sum of input orders", examples=[(4, 1)]
    )
    ordering: Ordering = Field(Ordering.LEX, description="Elimination strategy")
    coefficients: CoefficientMode = Field(CoefficientMode.FRACTION, description="Coefficient handling")
    variables: Optional[List[str]] = Field(
        None, description="Independent variables, in derivation order", examples=[["x1", "x2"]]
    )

    @field_validator("maxord")
    @classmethod
    def validate_maxord(cls, value: Optional[Tuple[int, ...]]) -> Optional[Tuple[int, ...]]:
        """Validate that bounds are nonnegative."""
        if value is not None:
            if not value:
                raise ValueError("maxord cannot be empty")
            if any(n < 0 for n in value):
                raise ValueError(f"maxord components must be nonnegative: {value}")
        return value

    @model_validator(mode="after")
    def validate_maxord_length(self) -> "MultiOptions":
        """Validate that maxord matches the variables list when both are present."""
        if self.maxord is not None and self.variables is not None and len(self.maxord) != len(self.variables):
            raise ValueError(
                f"maxord has {len(self.maxord)} components but {len(self.variables)} variables are declared"
            )
        return self

    def echo(self) -> dict:
        """Options as plain JSON values."""
        return {
            "maxord": list(self.maxord) if self.maxord is not None else None,
            "ordering": self.ordering.name.lower(),
            "coefficients": self.coefficients.name.lower(),
        }
