"""Engine results and the machine-readable report."""

from enum import Enum, auto
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.algebra.polyring import Poly
from src.data_models.stats import GroebnerStats
from src.exceptions import UsageError


class AdeStatus(Enum):
    """Outcome of an engine run."""

    OK = auto()  # an ADE was found
    NOT_FOUND = auto()  # no ADE within the order bound
    ERROR = auto()  # the run failed


class AdeResult(BaseModel):
    """An ADE satisfied by the target expression."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    polynomial: Poly = Field(description="Normalized polynomial over x, parameters and z-derivatives")
    output: str = Field("z", description="Name of the output indeterminate", examples=["z", "w"])
    independents: Tuple[str, ...] = Field(description="Independent variables, in derivation order", examples=[("x",)])
    order: Union[int, Tuple[int, ...]] = Field(description="Order, a multi-index for PDEs", examples=[2, (3, 1)])
    degree: int = Field(description="Total degree in the z-derivatives", ge=1, examples=[1, 2])
    elapsed_ms: float = Field(0.0, description="Engine wall-clock time", ge=0)
    options: Dict[str, Any] = Field(default_factory=dict, description="Echo of the options used")
    warnings: List[str] = Field(default_factory=list, description="Caveats attached to the result")
    derivations: Optional[int] = Field(None, description="Number of θ-derivations d of the inputs", ge=0)
    stats: Optional[GroebnerStats] = Field(None, description="Statistics of the eliminating Gröbner run")

    @property
    def status(self) -> AdeStatus:
        return AdeStatus.OK


class NotFound(BaseModel):
    """No ADE of order componentwise below the bound was found."""

    bound: Tuple[int, ...] = Field(description="The componentwise order bound searched", examples=[(3, 1)])
    output: str = Field("z", description="Name of the output indeterminate")
    independents: Tuple[str, ...] = Field(description="Independent variables, in derivation order")
    last_d: int = Field(description="Largest number of input derivations tried", ge=0)
    elapsed_ms: float = Field(0.0, description="Engine wall-clock time", ge=0)
    options: Dict[str, Any] = Field(default_factory=dict, description="Echo of the options used")

    @property
    def status(self) -> AdeStatus:
        return AdeStatus.NOT_FOUND

    @property
    def message(self) -> str:
        bound = ",".join(map(str, self.bound))
        return f"No ADE of order componentwise at most ({bound}) found"


AdeOutcome = Union[AdeResult, NotFound]


class TermReport(BaseModel):
    """One term of a reported polynomial."""

    coeff: str = Field(description="Integer coefficient", examples=["-2", "1"])
    monomial: List[Tuple[str, int]] = Field(
        description="Descriptor/exponent pairs", examples=[[["D[x](z)", 2]], [["z", 1], ["D[x,x](z)", 1]]]
    )


class AdeReport(BaseModel):
    """Machine-readable report of one run."""

    status: str = Field(description="ok, not_found or error", examples=["ok", "not_found", "error"])
    order: Optional[Union[int, List[int]]] = Field(None, description="Order of the ADE")
    degree: Optional[int] = Field(None, description="Total degree of the ADE", ge=1)
    poly: Optional[str] = Field(None, description="ASCII rendering of the ADE")
    terms: List[TermReport] = Field(default_factory=list, description="Terms in canonical order")
    output: Optional[str] = Field(None, description="Name of the output indeterminate")
    independents: List[str] = Field(default_factory=list, description="Independent variables")
    options: Dict[str, Any] = Field(default_factory=dict, description="Echo of the options used")
    elapsed_ms: Optional[float] = Field(None, description="Engine wall-clock time", ge=0)
    bound: Optional[List[int]] = Field(None, description="Order bound searched (not_found only)")
    message: Optional[str] = Field(None, description="Diagnostic message")
    warnings: List[str] = Field(default_factory=list, description="Caveats attached to the result")

    @field_validator("status")
    @classmethod
    def validate_status(cls, value: str) -> str:
        """Validate that the status is one of the AdeStatus names."""
        if value not in {status.name.lower() for status in AdeStatus}:
            raise ValueError(f"Unknown status: {value}")
        return value


EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_FOUND = 2
EXIT_USAGE = 64

EXIT_CODES = {AdeStatus.OK: EXIT_OK, AdeStatus.NOT_FOUND: EXIT_NOT_FOUND, AdeStatus.ERROR: EXIT_ERROR}
# most severe first
EXIT_PRECEDENCE = (EXIT_USAGE, EXIT_ERROR, EXIT_NOT_FOUND, EXIT_OK)


class FileRun(BaseModel):
    """Outcome of processing one system file."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    file_name: str = Field(description="The processed file", examples=["circle_plus_exp.dalg"])
    mode: str = Field(description="Engine that ran", examples=["uni", "multi", "unary"])
    outcome: Optional[AdeOutcome] = Field(None, description="Engine outcome, absent on failure")
    error: Optional[str] = Field(None, description="Failure message")
    error_kind: Optional[str] = Field(None, description="Exception class of the failure", examples=["ParseError"])
    saved_files: List[str] = Field(default_factory=list, description="Paths written for this file")

    @model_validator(mode="after")
    def validate_outcome(self) -> "FileRun":
        """Validate that exactly one of outcome and error is present."""
        if (self.outcome is None) == (self.error is None):
            raise ValueError("A file run carries either an outcome or an error")
        return self

    @property
    def status(self) -> AdeStatus:
        return AdeStatus.ERROR if self.outcome is None else self.outcome.status

    @property
    def exit_code(self) -> int:
        if self.error_kind == UsageError.__name__:
            return EXIT_USAGE
        return EXIT_CODES[self.status]


def combined_exit_code(runs: Sequence[FileRun]) -> int:
    """The most severe exit code among the runs (EXIT_OK for none)."""
    codes = {run.exit_code for run in runs}
    return next((code for code in EXIT_PRECEDENCE if code in codes), EXIT_OK)
