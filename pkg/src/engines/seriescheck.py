"""Truncated Taylor series oracle.

Series are sympy polynomials in the independent variables over QQ, truncated
at a total degree T. Every series also records the degree up to which its
coefficients are exact; derivation lowers it by one. ``certify`` substitutes
series solutions into an ADE and checks that the residual vanishes up to that
trusted degree.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum, auto
from typing import Any, Mapping, Optional, Sequence

from sympy import Symbol
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from src.algebra.diffalg import DiffFraction
from src.algebra.polyring import Poly, Variable, VarKind
from src.data_models.results import AdeResult
from src.exceptions import UsageError

MIN_CHECKED_COEFFICIENTS = 5


class SeriesOp(Enum):
    """Operations of series_arith."""

    ADD = auto()
    SUB = auto()
    MUL = auto()
    RECIPROCAL = auto()
    PARTIAL_DERIVE = auto()


class Builtin(Enum):
    """Elementary functions with rational Taylor coefficients at the origin."""

    EXP = auto()
    SIN = auto()
    COS = auto()
    POLY = auto()


def series_ring(variables: Sequence[str]) -> PolyRing:
    return PolyRing([Symbol(v) for v in variables], QQ, grlex)


@dataclass(frozen=True)
class TruncSeries:
    """A multivariate power series known up to total degree ``T``, exact up to ``trusted``."""

    variables: tuple[str, ...]
    T: int
    expr: PolyElement
    trusted: int

    def __post_init__(self) -> None:
        if any(sum(monom) > self.T for monom in self.expr.keys()):
            raise UsageError("Series has terms above its truncation degree")

    @classmethod
    def from_poly(cls, variables: Sequence[str], T: int, expr: PolyElement) -> "TruncSeries":
        return cls(tuple(variables), T, _truncate(expr, T), T)

    @classmethod
    def constant(cls, variables: Sequence[str], T: int, value: Any) -> "TruncSeries":
        return cls.from_poly(variables, T, series_ring(variables)(value))

    @property
    def ring(self) -> PolyRing:
        return self.expr.ring

    def coefficient(self, index: Sequence[int]) -> Any:
        return self.expr.get(tuple(index), QQ.zero)

    def _check(self, other: "TruncSeries") -> None:
        if other.variables != self.variables or other.T != self.T:
            raise UsageError("Series must share variables and truncation degree")

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        return series_arith(SeriesOp.ADD, self, other)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return series_arith(SeriesOp.SUB, self, other)

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        return series_arith(SeriesOp.MUL, self, other)

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(self.variables, self.T, -self.expr, self.trusted)

    def __pow__(self, exponent: int) -> "TruncSeries":
        if exponent < 0:
            return series_arith(SeriesOp.RECIPROCAL, self) ** -exponent
        result = TruncSeries.constant(self.variables, self.T, 1)
        for _ in range(exponent):
            result = result * self
        return result

    def scale(self, factor: Any) -> "TruncSeries":
        return TruncSeries(self.variables, self.T, self.expr.mul_ground(QQ.convert(factor)), self.trusted)

    def derive(self, axis: int) -> "TruncSeries":
        return series_arith(SeriesOp.PARTIAL_DERIVE, self, axis=axis)

    def is_zero_to(self, degree: int) -> bool:
        """Whether every coefficient of total degree at most ``degree`` vanishes."""
        return all(not c for monom, c in self.expr.items() if sum(monom) <= degree)


def _truncate(expr: PolyElement, T: int) -> PolyElement:
    return expr.ring.from_dict({m: c for m, c in expr.items() if sum(m) <= T})


def series_arith(
    op: SeriesOp, a: TruncSeries, b: Optional[TruncSeries] = None, axis: int = 0
) -> TruncSeries:
    """Exact truncated series arithmetic.

    Args:
        op: add, sub, mul, reciprocal or partial_derive
        a: first operand
        b: second operand of add, sub and mul
        axis: variable position for partial_derive

    Returns:
        The truncated result; derivation lowers the trusted degree by one

    Raises:
        UsageError: On a missing operand, mismatched series or a reciprocal of a series with zero constant term

    >>> x = series_ring(["x"]).gens[0]
    >>> one_plus_x = TruncSeries.from_poly(["x"], 4, 1 + x)
    >>> str(series_arith(SeriesOp.RECIPROCAL, one_plus_x).expr)
    'x**4 - x**3 + x**2 - x + 1'
    """
    if op in (SeriesOp.ADD, SeriesOp.SUB, SeriesOp.MUL):
        if b is None:
            raise UsageError(f"{op.name.lower()} needs two series")
        a._check(b)
        trusted = min(a.trusted, b.trusted)
        if op is SeriesOp.ADD:
            expr = a.expr + b.expr
        elif op is SeriesOp.SUB:
            expr = a.expr - b.expr
        else:
            expr = _mul(a.expr, b.expr, a.T)
        return TruncSeries(a.variables, a.T, expr, trusted)
    if op is SeriesOp.RECIPROCAL:
        c = a.coefficient((0,) * len(a.variables))
        if not c:
            raise UsageError("Reciprocal of a series with zero constant term")
        u = (a.expr - a.ring(c)).quo_ground(c)
        term = a.ring.one
        total = a.ring.one
        for _ in range(a.T):
            term = _mul(term, -u, a.T)
            if not term:
                break
            total += term
        return TruncSeries(a.variables, a.T, total.quo_ground(c), a.trusted)
    if op is SeriesOp.PARTIAL_DERIVE:
        if not 0 <= axis < len(a.variables):
            raise UsageError(f"No series variable at position {axis}")
        return TruncSeries(a.variables, a.T, a.expr.diff(a.ring.gens[axis]), a.trusted - 1)
    raise UsageError(f"Unsupported series operation {op}")


def _mul(f: PolyElement, g: PolyElement, T: int) -> PolyElement:
    """Product truncated at total degree T."""
    ring = f.ring
    result: dict[tuple, Any] = {}
    get = result.get
    for m1, c1 in f.items():
        d1 = sum(m1)
        for m2, c2 in g.items():
            if d1 + sum(m2) > T:
                continue
            m = ring.monomial_mul(m1, m2)
            result[m] = get(m, QQ.zero) + c1 * c2
    return ring.from_dict({m: c for m, c in result.items() if c})


def _taylor_coefficient(kind: Builtin, k: int) -> Any:
    if kind is Builtin.EXP:
        return QQ(1, math.factorial(k))
    if kind is Builtin.SIN:
        return QQ((-1) ** (k // 2), math.factorial(k)) if k % 2 else QQ.zero
    if kind is Builtin.COS:
        return QQ.zero if k % 2 else QQ((-1) ** (k // 2), math.factorial(k))
    raise UsageError(f"No Taylor coefficients for {kind}")


def series_builtin(kind: Builtin, form: TruncSeries) -> TruncSeries:
    """Truncated expansion of exp, sin or cos of a form without constant term, or the form itself.

    Raises:
        UsageError: If the argument of exp, sin or cos has a nonzero constant term
    """
    if kind is Builtin.POLY:
        return form
    if form.coefficient((0,) * len(form.variables)):
        raise UsageError(f"{kind.name.lower()} needs an argument vanishing at the origin")
    total = TruncSeries.constant(form.variables, form.T, _taylor_coefficient(kind, 0))
    power = TruncSeries.constant(form.variables, form.T, 1)
    for k in range(1, form.T + 1):
        power = power * form
        if not power.expr:
            break
        coefficient = _taylor_coefficient(kind, k)
        if coefficient:
            total = total + power.scale(coefficient)
    return total


def derivative_series(series: TruncSeries, index: Sequence[int]) -> TruncSeries:
    """∂^index of a series."""
    result = series
    for axis, count in enumerate(index):
        for _ in range(count):
            result = result.derive(axis)
    return result


def _variable_series(
    variable: Variable,
    assignment: Mapping[str, TruncSeries],
    independents: Sequence[str],
    parameters: Mapping[str, Any],
    T: int,
) -> TruncSeries:
    if variable.kind is VarKind.DERIVATIVE:
        if variable.name not in assignment:
            raise UsageError(f"No series given for {variable.name}")
        return derivative_series(assignment[variable.name], variable.index)
    if variable.kind is VarKind.INDEPENDENT:
        gens = series_ring(independents).gens
        return TruncSeries.from_poly(independents, T, gens[list(independents).index(variable.name)])
    if variable.kind is VarKind.PARAMETER:
        if variable.name not in parameters:
            raise UsageError(f"No value given for parameter {variable.name}")
        return TruncSeries.constant(independents, T, QQ.convert(parameters[variable.name]))
    raise UsageError(f"Unexpected variable {variable} in a differential polynomial")


def evaluate_poly(
    poly: Poly,
    assignment: Mapping[str, TruncSeries],
    independents: Sequence[str],
    parameters: Mapping[str, Any],
    T: int,
) -> TruncSeries:
    """Substitute series for the variables of a flattened differential polynomial."""
    values = {
        position: _variable_series(variable, assignment, independents, parameters, T)
        for position, variable in enumerate(poly.table.variables)
        if poly.degree_in(variable) > 0
    }
    result = TruncSeries.constant(independents, T, 0)
    for monom, coeff in poly.expr.items():
        term = TruncSeries.constant(independents, T, poly.table.domain.to_sympy(coeff))
        for position, exponent in enumerate(monom):
            if exponent:
                term = term * values[position] ** exponent
        result = result + term
    if values:
        trusted = min(min(v.trusted for v in values.values()), result.trusted)
        result = TruncSeries(result.variables, result.T, result.expr, trusted)
    return result


def evaluate_target(
    r: DiffFraction,
    assignment: Mapping[str, TruncSeries],
    parameters: Optional[Mapping[str, Any]] = None,
    T: Optional[int] = None,
) -> TruncSeries:
    """The series of r(y_1, ..., y_N) for series solutions y_i.

    Raises:
        UsageError: If a series or parameter value is missing, or r's denominator vanishes at the origin
    """
    independents = r.context.independents
    if T is None:
        T = min((s.T for s in assignment.values()), default=0)
    num = evaluate_poly(r.num.poly, assignment, independents, parameters or {}, T)
    den = evaluate_poly(r.den.poly, assignment, independents, parameters or {}, T)
    return num * den**-1


def certify(
    ade: AdeResult,
    assignment: Mapping[str, TruncSeries],
    parameters: Optional[Mapping[str, Any]] = None,
    T: Optional[int] = None,
) -> bool:
    """Whether the ADE annihilates the output series up to its trusted degree.

    Args:
        ade: the result to check
        assignment: series for the output indeterminate (other entries are ignored)
        parameters: rational values of the parameters occurring in the ADE
        T: truncation degree; taken from the output series when omitted

    Returns:
        True iff the residual vanishes up to the trusted degree

    Raises:
        UsageError: If T is too small, a parameter value or the output series is missing
    """
    if ade.output not in assignment:
        raise UsageError(f"No series given for {ade.output}")
    z = assignment[ade.output]
    T = z.T if T is None else T
    if z.T != T:
        raise UsageError(f"Series for {ade.output} is truncated at {z.T}, expected {T}")
    if tuple(ade.independents) != z.variables:
        raise UsageError(f"Series variables {z.variables} differ from {tuple(ade.independents)}")

    order = max(sum(v.index) for v in ade.polynomial.variables() if v.is_derivative)
    if T <= order + ade.degree:
        raise UsageError(f"Truncation degree {T} must exceed order {order} plus degree {ade.degree}")

    residual = evaluate_poly(ade.polynomial, {ade.output: z}, z.variables, parameters or {}, T)
    l = len(z.variables)
    checked = math.comb(residual.trusted + l, l) if residual.trusted >= 0 else 0
    if checked < MIN_CHECKED_COEFFICIENTS:
        raise UsageError(f"Truncation degree {T} leaves only {checked} checkable coefficients")
    logging.info("Certifying up to degree %d (%d coefficients)", residual.trusted, checked)
    return residual.is_zero_to(residual.trusted)
