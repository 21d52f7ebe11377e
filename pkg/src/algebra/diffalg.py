"""Differential polynomials, the θ-ranking and derivations.

Derivative multi-indices are ranked by the graded co-lex order: total order
first, then the reversed index lexicographically. For two independent variables
that is the Cantor pairing, for one it is the identity. ``θ^k`` is the composite
partial derivative whose multi-index has rank ``k``.
"""

import math
from dataclasses import dataclass
from typing import Any, Optional, Sequence, Union

from src.algebra.polyring import Poly, Variable, VarKind, VarTable, make_table
from src.exceptions import DegenerateExpressionError, InternalError, UsageError

MultiIndex = tuple[int, ...]


@dataclass(frozen=True)
class ThetaRank:
    """Graded co-lex ranking of N^l."""

    l: int

    def __post_init__(self) -> None:
        if self.l < 1:
            raise UsageError(f"The number of independent variables must be positive, got {self.l}")


def _rank_of(rank: Union[ThetaRank, int]) -> ThetaRank:
    return rank if isinstance(rank, ThetaRank) else ThetaRank(rank)


def _compositions(total: int, parts: int) -> int:
    """Number of ways to write ``total`` as an ordered sum of ``parts`` nonnegative integers."""
    if parts == 0:
        return 1 if total == 0 else 0
    return math.comb(total + parts - 1, parts - 1)


def sigma_rank(rank: Union[ThetaRank, int], t: Sequence[int]) -> int:
    """Position of a multi-index in the graded co-lex enumeration.

    Args:
        rank: the ranking (or the number l of independent variables)
        t: multi-index of length l

    Returns:
        The rank; (0, ..., 0) has rank 0

    Raises:
        UsageError: If a component is negative or the length is not l

    >>> [sigma_rank(2, t) for t in [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0)]]
    [1, 2, 3, 4, 5, 6]
    >>> sigma_rank(2, (1, 2))
    8
    """
    l = _rank_of(rank).l
    t = tuple(t)
    if len(t) != l:
        raise UsageError(f"Multi-index {t} does not have {l} components")
    if any(n < 0 for n in t):
        raise UsageError(f"Multi-index components must be nonnegative: {t}")
    s = sum(t)
    position = math.comb(s - 1 + l, l) if s > 0 else 0
    remaining = s
    for i, n in enumerate(reversed(t)):
        for c in range(n):
            position += _compositions(remaining - c, l - i - 1)
        remaining -= n
    return position


def sigma_unrank(rank: Union[ThetaRank, int], k: int) -> MultiIndex:
    """Inverse of sigma_rank.

    >>> sigma_unrank(2, 8), sigma_unrank(2, 12), sigma_unrank(3, 4)
    ((1, 2), (2, 2), (2, 0, 0))
    """
    l = _rank_of(rank).l
    if k < 0:
        raise UsageError(f"Rank must be nonnegative, got {k}")
    s = 0
    while math.comb(s + l, l) <= k:
        s += 1
    j = k - (math.comb(s - 1 + l, l) if s > 0 else 0)
    reversed_index = []
    remaining = s
    for i in range(l):
        if i == l - 1:
            reversed_index.append(remaining)
            break
        for c in range(remaining + 1):
            count = _compositions(remaining - c, l - i - 1)
            if j < count:
                reversed_index.append(c)
                break
            j -= count
        remaining -= reversed_index[-1]
    return tuple(reversed(reversed_index))


@dataclass(frozen=True)
class DiffIndeterminate:
    """A differential indeterminate depending on some of the independent variables."""

    name: str
    dependencies: tuple[str, ...]
    ordinal: int = 0

    def __post_init__(self) -> None:
        if not self.dependencies:
            raise UsageError(f"Indeterminate {self.name} must depend on at least one independent variable")


@dataclass(frozen=True)
class DiffContext:
    """Ambient independent variables, indeterminates and parameters of a session.

    Independent variables are listed in derivation order; multi-indices have one slot per entry.
    """

    independents: tuple[str, ...]
    indeterminates: tuple[DiffIndeterminate, ...] = ()
    parameters: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.independents:
            raise UsageError("At least one independent variable is required")
        names = list(self.independents) + [y.name for y in self.indeterminates] + list(self.parameters)
        if len(set(names)) != len(names):
            raise UsageError(f"Independent variables, indeterminates and parameters must be distinct: {names}")
        for y in self.indeterminates:
            unknown = set(y.dependencies) - set(self.independents)
            if unknown:
                raise UsageError(f"Indeterminate {y.name} depends on undeclared variables {sorted(unknown)}")

    @property
    def l(self) -> int:
        return len(self.independents)

    @property
    def theta(self) -> ThetaRank:
        return ThetaRank(self.l)

    def indeterminate(self, name: str) -> DiffIndeterminate:
        for y in self.indeterminates:
            if y.name == name:
                return y
        raise UsageError(f"Unknown indeterminate {name}")

    def with_indeterminate(self, name: str, dependencies: Optional[Sequence[str]] = None) -> "DiffContext":
        """Context extended by a new indeterminate (ranked above the existing ones)."""
        if any(y.name == name for y in self.indeterminates):
            return self
        ordinal = min((y.ordinal for y in self.indeterminates), default=1) - 1
        new = DiffIndeterminate(name, tuple(dependencies or self.independents), ordinal)
        return DiffContext(self.independents, self.indeterminates + (new,), self.parameters)

    def descriptor(self, name: str, index: Sequence[int]) -> Variable:
        """The variable of y^(index)."""
        y = self.indeterminate(name)
        index = tuple(index)
        if len(index) != self.l:
            raise UsageError(f"Derivative index {index} of {name} needs {self.l} components")
        for slot, n in enumerate(index):
            if n and self.independents[slot] not in y.dependencies:
                raise UsageError(f"{name} does not depend on {self.independents[slot]}")
        return Variable.derivative(name, index, y.ordinal)

    def independent_variable(self, name: str) -> Variable:
        if name not in self.independents:
            raise UsageError(f"Unknown independent variable {name}")
        return Variable.independent(name, self.independents.index(name))

    def parameter_variable(self, name: str) -> Variable:
        if name not in self.parameters:
            raise UsageError(f"Unknown parameter {name}")
        return Variable.parameter(name, self.parameters.index(name))

    def base_variables(self) -> list[Variable]:
        """Independent variables and parameters."""
        return [self.independent_variable(x) for x in self.independents] + [
            self.parameter_variable(c) for c in self.parameters
        ]


def _unify(a: VarTable, b: VarTable) -> VarTable:
    if a == b:
        return a
    return make_table(set(a.variables) | set(b.variables))


class DiffPoly:
    """A differential polynomial: a Poly whose derivative variables follow a DiffContext."""

    __slots__ = ("context", "poly")

    def __init__(self, context: DiffContext, poly: Poly) -> None:
        if poly.table.is_fraction_mode:
            raise InternalError("Differential polynomials use Q-coefficient tables")
        if any(v.kind is VarKind.AUXILIARY for v in poly.variables()):
            raise InternalError("Differential polynomials cannot involve auxiliary variables")
        self.context = context
        self.poly = poly

    @classmethod
    def constant(cls, context: DiffContext, value: Any) -> "DiffPoly":
        return cls(context, Poly.constant(make_table(()), value))

    @classmethod
    def of_variable(cls, context: DiffContext, variable: Variable) -> "DiffPoly":
        return cls(context, Poly.variable(make_table([variable]), variable))

    @classmethod
    def descriptor(cls, context: DiffContext, name: str, index: Sequence[int]) -> "DiffPoly":
        return cls.of_variable(context, context.descriptor(name, index))

    @classmethod
    def independent(cls, context: DiffContext, name: str) -> "DiffPoly":
        return cls.of_variable(context, context.independent_variable(name))

    @classmethod
    def parameter(cls, context: DiffContext, name: str) -> "DiffPoly":
        return cls.of_variable(context, context.parameter_variable(name))

    def _lift(self, other: Union["DiffPoly", int]) -> tuple[Poly, Poly]:
        if not isinstance(other, DiffPoly):
            other = DiffPoly.constant(self.context, other)
        table = _unify(self.poly.table, other.poly.table)
        return self.poly.to_table(table), other.poly.to_table(table)

    def __add__(self, other: Union["DiffPoly", int]) -> "DiffPoly":
        f, g = self._lift(other)
        return DiffPoly(self.context, f + g)

    __radd__ = __add__

    def __sub__(self, other: Union["DiffPoly", int]) -> "DiffPoly":
        f, g = self._lift(other)
        return DiffPoly(self.context, f - g)

    def __rsub__(self, other: int) -> "DiffPoly":
        return -self + other

    def __mul__(self, other: Union["DiffPoly", int]) -> "DiffPoly":
        f, g = self._lift(other)
        return DiffPoly(self.context, f * g)

    __rmul__ = __mul__

    def __neg__(self) -> "DiffPoly":
        return DiffPoly(self.context, -self.poly)

    def __pow__(self, exponent: int) -> "DiffPoly":
        return DiffPoly(self.context, self.poly**exponent)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiffPoly):
            return NotImplemented
        f, g = self._lift(other)
        return f == g

    def __hash__(self) -> int:
        return hash(self.compact().poly)

    def __bool__(self) -> bool:
        return not self.poly.is_zero

    def __repr__(self) -> str:
        return f"DiffPoly({self.poly})"

    def __str__(self) -> str:
        return str(self.poly)

    def with_context(self, context: DiffContext) -> "DiffPoly":
        """The same polynomial in a (wider) context."""
        return DiffPoly(context, self.poly)

    @property
    def is_zero(self) -> bool:
        return self.poly.is_zero

    def variables(self) -> set[Variable]:
        return self.poly.variables()

    def descriptors(self, name: Optional[str] = None) -> set[Variable]:
        """Derivative variables that occur, optionally only those of one indeterminate."""
        return {v for v in self.variables() if v.is_derivative and (name is None or v.name == name)}

    def indeterminate_names(self) -> set[str]:
        return {v.name for v in self.descriptors()}

    def compact(self) -> "DiffPoly":
        """The same polynomial over the table of the variables it uses."""
        table = make_table(self.variables())
        return DiffPoly(self.context, self.poly.to_table(table))

    def diff(self, variable: Variable) -> "DiffPoly":
        """Formal partial derivative with respect to a ring variable."""
        if variable not in self.poly.table:
            return DiffPoly.constant(self.context, 0)
        return DiffPoly(self.context, self.poly.diff(variable))

    def degree_in(self, variable: Variable) -> int:
        return self.poly.degree_in(variable)

    def coeff_of_power(self, variable: Variable, exponent: int) -> "DiffPoly":
        if variable not in self.poly.table:
            return self if exponent == 0 else DiffPoly.constant(self.context, 0)
        return DiffPoly(self.context, self.poly.coeff_of_power(variable, exponent))

    def leader(self, name: Optional[str] = None) -> Variable:
        """Highest-ranked derivative variable (of one indeterminate when ``name`` is given)."""
        descriptors = self.descriptors(name)
        if not descriptors:
            raise UsageError(f"{self} involves no derivative of {name or 'any indeterminate'}")
        return max(descriptors, key=Variable.rank_key)

    def substitute(self, variable: Variable, value: "DiffPoly") -> "DiffPoly":
        """Replace a variable by a polynomial."""
        if variable not in self.poly.table or variable not in self.variables():
            return self
        result = DiffPoly.constant(self.context, 0)
        for exponent in range(self.degree_in(variable), -1, -1):
            result = result * value + self.coeff_of_power(variable, exponent)
        return result


def partial_derive(p: DiffPoly, axis: int) -> DiffPoly:
    """Single partial derivative with respect to the independent variable at position ``axis``.

    Descriptors of indeterminates that do not depend on that variable differentiate to zero;
    parameters are constants.
    """
    context = p.context
    if not 0 <= axis < context.l:
        raise UsageError(f"No independent variable at position {axis}")
    x = context.independents[axis]
    result = DiffPoly.constant(context, 0)
    for v in sorted(p.variables(), key=Variable.rank_key, reverse=True):
        if v.kind is VarKind.PARAMETER:
            continue
        if v.kind is VarKind.INDEPENDENT:
            if v.name == x:
                result = result + p.diff(v)
            continue
        if x not in context.indeterminate(v.name).dependencies:
            continue
        shifted = tuple(n + 1 if slot == axis else n for slot, n in enumerate(v.index))
        result = result + p.diff(v) * DiffPoly.of_variable(context, Variable.derivative(v.name, shifted, v.ordinal))
    return result.compact()


def theta_derive(p: DiffPoly, k: int) -> DiffPoly:
    """θ^k p: the composite partial derivative with multi-index sigma_unrank(k).

    Args:
        p: a differential polynomial
        k: the θ-order of the derivation

    Returns:
        The derived polynomial, computed as iterated single partials
    """
    result = p
    for axis, count in enumerate(sigma_unrank(p.context.theta, k)):
        for _ in range(count):
            if result.is_zero:
                return result
            result = partial_derive(result, axis)
    return result


def total_derive(p: DiffPoly) -> DiffPoly:
    """Ordinary total derivative d/dx.

    Raises:
        UsageError: If the context has more than one independent variable
    """
    if p.context.l != 1:
        raise UsageError(f"Total derivative needs one independent variable, got {p.context.l}")
    return partial_derive(p, 0)


def diff_order(p: DiffPoly, name: Optional[str] = None) -> MultiIndex:
    """Componentwise maximum of the derivative multi-indices in p.

    Raises:
        UsageError: If p involves no derivative variable
    """
    descriptors = p.descriptors(name)
    if not descriptors:
        raise UsageError(f"{p} involves no derivative of {name or 'any indeterminate'}")
    return tuple(max(v.index[slot] for v in descriptors) for slot in range(p.context.l))


def theta_order(p: DiffPoly, name: Optional[str] = None) -> int:
    """Largest θ-rank among the derivative variables of p."""
    descriptors = p.descriptors(name)
    if not descriptors:
        raise UsageError(f"{p} involves no derivative of {name or 'any indeterminate'}")
    return max(sigma_rank(p.context.theta, v.index) for v in descriptors)


def flatten(p: DiffPoly, table: VarTable) -> Poly:
    """p as a plain polynomial over ``table``.

    Raises:
        InternalError: If p uses a variable the table does not register
    """
    missing = [v for v in p.variables() if v not in table and v not in table.coefficient_variables]
    if missing:
        raise InternalError(f"Variables {', '.join(map(str, missing))} are not registered in {table!r}")
    return p.compact().poly.to_table(table)


class DiffFraction:
    """A rational differential expression num/den in lowest terms."""

    __slots__ = ("num", "den")

    def __init__(self, num: DiffPoly, den: Optional[DiffPoly] = None) -> None:
        context = num.context
        if den is None:
            den = DiffPoly.constant(context, 1)
        if den.is_zero:
            raise DegenerateExpressionError("Denominator is identically zero")
        f, g = num._lift(den)
        p, q = f.expr.cancel(g.expr)
        if q.LC < 0:
            p, q = -p, -q
        self.num = DiffPoly(context, Poly(f.table, p)).compact()
        self.den = DiffPoly(context, Poly(f.table, q)).compact()

    @classmethod
    def lift(cls, value: Union["DiffFraction", DiffPoly]) -> "DiffFraction":
        return value if isinstance(value, DiffFraction) else cls(value)

    @property
    def context(self) -> DiffContext:
        return self.num.context

    def __add__(self, other: Union["DiffFraction", DiffPoly]) -> "DiffFraction":
        other = DiffFraction.lift(other)
        return DiffFraction(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: Union["DiffFraction", DiffPoly]) -> "DiffFraction":
        other = DiffFraction.lift(other)
        return DiffFraction(self.num * other.den - other.num * self.den, self.den * other.den)

    def __mul__(self, other: Union["DiffFraction", DiffPoly]) -> "DiffFraction":
        other = DiffFraction.lift(other)
        return DiffFraction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: Union["DiffFraction", DiffPoly]) -> "DiffFraction":
        other = DiffFraction.lift(other)
        if other.num.is_zero:
            raise DegenerateExpressionError("Division by zero")
        return DiffFraction(self.num * other.den, self.den * other.num)

    def __neg__(self) -> "DiffFraction":
        return DiffFraction(-self.num, self.den)

    def __pow__(self, exponent: int) -> "DiffFraction":
        if exponent < 0:
            if self.num.is_zero:
                raise DegenerateExpressionError("Zero raised to a negative power")
            return DiffFraction(self.den**-exponent, self.num**-exponent)
        return DiffFraction(self.num**exponent, self.den**exponent)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (DiffFraction, DiffPoly)):
            return NotImplemented
        other = DiffFraction.lift(other)
        return self.num * other.den == other.num * self.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"DiffFraction({self.num}, {self.den})"

    @property
    def is_polynomial(self) -> bool:
        return self.den.poly.is_constant

    def variables(self) -> set[Variable]:
        return self.num.variables() | self.den.variables()

    def descriptors(self) -> set[Variable]:
        return self.num.descriptors() | self.den.descriptors()

    def derive(self, axis: int) -> "DiffFraction":
        """Partial derivative by the quotient rule."""
        num = partial_derive(self.num, axis) * self.den - self.num * partial_derive(self.den, axis)
        return DiffFraction(num, self.den * self.den)
