"""Exact sparse multivariate polynomials with pluggable monomial orders.

Polynomials are sympy ``PolyElement`` objects living in the ring of a VarTable.
The table's own ring lists its variables highest-ranked first under lex, which
is the canonical order used for printing and normalization. A MonomialOrder is
realized as a second sympy ring over the same variables, permuted so that the
order's highest variable comes first; ``set_ring`` moves polynomials between the
two.
"""

import functools
import operator
from dataclasses import dataclass
from enum import Enum, IntEnum, auto
from typing import Any, Callable, Iterable, Iterator, Optional, Sequence, Union

from sympy import Symbol
from sympy.polys.domains import QQ
from sympy.polys.orderings import MonomialOrder as SympyMonomialOrder
from sympy.polys.orderings import grevlex, lex
from sympy.polys.polyerrors import ExactQuotientFailed, GeneratorsError
from sympy.polys.rings import PolyElement, PolyRing

from src.exceptions import InternalError, UsageError

Monomial = tuple[int, ...]


class VarKind(IntEnum):
    """Variable classes, ranked Auxiliary > Derivative > Independent > Parameter."""

    PARAMETER = 0
    INDEPENDENT = 1
    DERIVATIVE = 2
    AUXILIARY = 3


@dataclass(frozen=True)
class Variable:
    """A polynomial variable: an independent variable, a parameter, a derivative descriptor or an auxiliary.

    ``ordinal`` is the declaration position within its class; it breaks ties in the
    canonical rank so that earlier declarations rank higher.
    """

    kind: VarKind
    name: str
    index: tuple[int, ...] = ()
    ordinal: int = 0

    @classmethod
    def parameter(cls, name: str, ordinal: int = 0) -> "Variable":
        return cls(VarKind.PARAMETER, name, (), ordinal)

    @classmethod
    def independent(cls, name: str, ordinal: int = 0) -> "Variable":
        return cls(VarKind.INDEPENDENT, name, (), ordinal)

    @classmethod
    def derivative(cls, name: str, index: Sequence[int], ordinal: int = 0) -> "Variable":
        index = tuple(index)
        if not index or any(n < 0 for n in index):
            raise UsageError(f"Invalid derivative index {index} for {name}")
        return cls(VarKind.DERIVATIVE, name, index, ordinal)

    @classmethod
    def auxiliary(cls, name: str = "_t") -> "Variable":
        return cls(VarKind.AUXILIARY, name)

    @property
    def label(self) -> str:
        """Unique symbol name, e.g. ``y[1,2]`` for the descriptor y^(1,2)."""
        if self.kind is VarKind.DERIVATIVE:
            return f"{self.name}[{','.join(map(str, self.index))}]"
        return self.name

    @property
    def symbol(self) -> Symbol:
        return Symbol(self.label)

    @property
    def is_derivative(self) -> bool:
        return self.kind is VarKind.DERIVATIVE

    def rank_key(self) -> tuple[Any, ...]:
        """Canonical rank: class first, then graded co-lex on derivative indices."""
        return (int(self.kind), sum(self.index), tuple(reversed(self.index)), -self.ordinal, self.name)

    def __str__(self) -> str:
        return self.label


class VarTable:
    """An ordered set of variables and the sympy ring they generate.

    Variables are kept highest-ranked first. ``coefficient_variables`` (independent
    variables and parameters in fraction-coefficient mode) are moved into the ground
    domain Q(coefficient_variables) instead of being ring generators.
    """

    def __init__(self, variables: Iterable[Variable], coefficient_variables: Iterable[Variable] = ()) -> None:
        self.variables: tuple[Variable, ...] = tuple(sorted(set(variables), key=Variable.rank_key, reverse=True))
        self.coefficient_variables: tuple[Variable, ...] = tuple(
            sorted(set(coefficient_variables), key=Variable.rank_key, reverse=True)
        )
        if set(self.variables) & set(self.coefficient_variables):
            raise UsageError("A variable cannot be both a generator and a coefficient variable")
        labels = [v.label for v in self.variables + self.coefficient_variables]
        if len(set(labels)) != len(labels):
            raise UsageError(f"Duplicate variable names in table: {labels}")

        self._index = {v: i for i, v in enumerate(self.variables)}
        if self.coefficient_variables:
            self.domain = QQ.frac_field(*[v.symbol for v in self.coefficient_variables])
        else:
            self.domain = QQ
        self.ring = PolyRing([v.symbol for v in self.variables], self.domain, lex)
        self._order_rings: dict["MonomialOrder", PolyRing] = {}

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, VarTable)
            and self.variables == other.variables
            and self.coefficient_variables == other.coefficient_variables
        )

    def __hash__(self) -> int:
        return hash((self.variables, self.coefficient_variables))

    def __len__(self) -> int:
        return len(self.variables)

    def __iter__(self) -> Iterator[Variable]:
        return iter(self.variables)

    def __contains__(self, variable: object) -> bool:
        return variable in self._index

    def __repr__(self) -> str:
        return f"VarTable({', '.join(v.label for v in self.variables)})"

    @property
    def is_fraction_mode(self) -> bool:
        return bool(self.coefficient_variables)

    def index(self, variable: Variable) -> int:
        """Dense index of a variable.

        Raises:
            InternalError: If the variable is not registered
        """
        try:
            return self._index[variable]
        except KeyError:
            raise InternalError(f"Variable {variable} is not registered in {self!r}")

    def gen(self, variable: Variable) -> PolyElement:
        return self.ring.gens[self.index(variable)]

    def coefficient_gen(self, variable: Variable) -> Any:
        """A coefficient variable as an element of the ground domain."""
        position = self.coefficient_variables.index(variable)
        return self.domain.field.gens[position]

    def extend(self, variables: Iterable[Variable]) -> "VarTable":
        """A table holding these variables plus the new ones."""
        return make_table(tuple(self.variables) + tuple(variables), self.coefficient_variables)

    def ring_for(self, order: "MonomialOrder") -> PolyRing:
        """The sympy ring realizing ``order`` over this table's variables."""
        ring = self._order_rings.get(order)
        if ring is None:
            symbols = [self.variables[i].symbol for i in order.ranking]
            ring = PolyRing(symbols, self.domain, order.sympy_order)
            self._order_rings[order] = ring
        return ring

    def embed(self, expr: PolyElement) -> PolyElement:
        """Move a polynomial from a table over a subset of these variables into this table's ring."""
        if expr.ring == self.ring:
            return expr
        try:
            return expr.set_ring(self.ring)
        except GeneratorsError as e:
            raise InternalError(f"Polynomial has variables outside {self!r}: {str(e)}")

    def absorb(self, expr: PolyElement, source: "VarTable") -> PolyElement:
        """Move a polynomial of a Q-coefficient table into this fraction-coefficient table.

        Variables of ``source`` that are coefficient variables here are folded into the coefficients.
        """
        if not self.is_fraction_mode:
            return self.embed(expr)
        field = self.domain.field
        main_slots = []
        coeff_slots = []
        for position, variable in enumerate(source.variables):
            if variable in self._index:
                main_slots.append((position, self._index[variable]))
            elif variable in self.coefficient_variables:
                coeff_slots.append((position, self.coefficient_gen(variable)))
            else:
                raise InternalError(f"Variable {variable} is not registered in {self!r}")

        terms: dict[Monomial, Any] = {}
        zero_monom = self.ring.zero_monom
        for monom, coeff in expr.items():
            new_monom = list(zero_monom)
            for source_position, target_position in main_slots:
                new_monom[target_position] = monom[source_position]
            value = field(coeff)
            for source_position, generator in coeff_slots:
                if monom[source_position]:
                    value *= generator ** monom[source_position]
            key = tuple(new_monom)
            terms[key] = terms.get(key, field.zero) + value
        return self.ring.from_dict({m: c for m, c in terms.items() if c})

    def expand(self, expr: PolyElement) -> tuple["VarTable", PolyElement]:
        """Inverse of ``absorb``: clear coefficient denominators and return a Q-coefficient table and polynomial.

        The result is a polynomial multiple of the input by a nonzero element of Q[coefficient variables].
        """
        full = make_table(self.variables + self.coefficient_variables)
        if not self.is_fraction_mode:
            return full, full.embed(expr)
        if not expr:
            return full, full.ring.zero

        common = functools.reduce(lambda a, b: a.lcm(b), [c.denom for c in expr.values()])
        coefficient_positions = [full.index(v) for v in self.coefficient_variables]
        main_positions = [full.index(v) for v in self.variables]
        terms: dict[Monomial, Any] = {}
        for monom, coeff in expr.items():
            numerator = coeff.numer * common.exquo(coeff.denom)
            for inner_monom, inner_coeff in numerator.items():
                new_monom = [0] * len(full)
                for position, exponent in zip(main_positions, monom):
                    new_monom[position] = exponent
                for position, exponent in zip(coefficient_positions, inner_monom):
                    new_monom[position] += exponent
                key = tuple(new_monom)
                terms[key] = terms.get(key, QQ.zero) + QQ.convert(inner_coeff)
        return full, full.ring.from_dict({m: c for m, c in terms.items() if c})


@functools.lru_cache(maxsize=None)
def _cached_table(variables: frozenset, coefficient_variables: frozenset) -> VarTable:
    return VarTable(variables, coefficient_variables)


def make_table(variables: Iterable[Variable], coefficient_variables: Iterable[Variable] = ()) -> VarTable:
    """Get the (shared) VarTable over a set of variables."""
    return _cached_table(frozenset(variables), frozenset(coefficient_variables))


class OrderKind(Enum):
    """Monomial order families."""

    LEX = auto()
    DEGREVLEX = auto()
    BLOCK = auto()


class BlockOrder(SympyMonomialOrder):
    """Two-block elimination order: compare the leading ``split`` exponents first, then the rest.

    Each block is compared with its own inner order (lex or grevlex).
    """

    alias = "block"
    is_global = True

    def __init__(self, split: int, high: SympyMonomialOrder = grevlex, low: SympyMonomialOrder = grevlex) -> None:
        self.split = split
        self.high = high
        self.low = low

    def __call__(self, monomial: Monomial) -> tuple[Any, Any]:
        return self.high(monomial[: self.split]), self.low(monomial[self.split :])

    def __repr__(self) -> str:
        return f"BlockOrder({self.split}, {self.high!r}, {self.low!r})"

    def __str__(self) -> str:
        return f"block({self.split}, {self.high}, {self.low})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BlockOrder)
            and (self.split, self.high, self.low) == (other.split, other.high, other.low)
        )

    def __hash__(self) -> int:
        return hash((self.__class__, self.split, self.high, self.low))


_INNER_ORDERS = {OrderKind.LEX: lex, OrderKind.DEGREVLEX: grevlex}


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order over a VarTable.

    ``ranking`` lists dense variable indices highest first and must be a permutation of the
    table. For BLOCK orders the first ``split`` ranked variables form the high block.
    """

    table: VarTable
    kind: OrderKind
    ranking: tuple[int, ...]
    split: int = 0
    high_inner: OrderKind = OrderKind.DEGREVLEX
    low_inner: OrderKind = OrderKind.DEGREVLEX

    def __post_init__(self) -> None:
        if sorted(self.ranking) != list(range(len(self.table))):
            raise UsageError("Monomial order ranking must be a permutation of the variable table")
        if self.kind is OrderKind.BLOCK and not 0 <= self.split <= len(self.table):
            raise UsageError(f"Block split {self.split} out of range")
        if self.high_inner is OrderKind.BLOCK or self.low_inner is OrderKind.BLOCK:
            raise UsageError("Block inner orders must be LEX or DEGREVLEX")

    @classmethod
    def lex(cls, table: VarTable, ranking: Optional[Sequence[Variable]] = None) -> "MonomialOrder":
        return cls(table, OrderKind.LEX, _ranking(table, ranking))

    @classmethod
    def degrevlex(cls, table: VarTable, ranking: Optional[Sequence[Variable]] = None) -> "MonomialOrder":
        return cls(table, OrderKind.DEGREVLEX, _ranking(table, ranking))

    @classmethod
    def block(
        cls,
        table: VarTable,
        high: Sequence[Variable],
        low: Sequence[Variable],
        high_inner: OrderKind = OrderKind.DEGREVLEX,
        low_inner: OrderKind = OrderKind.DEGREVLEX,
    ) -> "MonomialOrder":
        """Block order with ``high`` dominating ``low``; both lists are ranked highest first."""
        if set(high) & set(low):
            raise UsageError("Block order blocks must be disjoint")
        return cls(
            table, OrderKind.BLOCK, _ranking(table, list(high) + list(low)), len(high), high_inner, low_inner
        )

    @property
    def sympy_order(self) -> SympyMonomialOrder:
        if self.kind is OrderKind.BLOCK:
            return BlockOrder(self.split, _INNER_ORDERS[self.high_inner], _INNER_ORDERS[self.low_inner])
        return _INNER_ORDERS[self.kind]

    @property
    def ring(self) -> PolyRing:
        return self.table.ring_for(self)

    @property
    def ranked_variables(self) -> tuple[Variable, ...]:
        return tuple(self.table.variables[i] for i in self.ranking)

    def key(self, monomial: Monomial) -> Any:
        """Sort key of a monomial given in table (dense) coordinates."""
        return self.sympy_order(tuple(monomial[i] for i in self.ranking))

    def to_order(self, expr: PolyElement) -> PolyElement:
        return self.table.embed(expr).set_ring(self.ring)

    def from_order(self, expr: PolyElement) -> PolyElement:
        return expr.set_ring(self.table.ring)


def _ranking(table: VarTable, ranking: Optional[Sequence[Variable]]) -> tuple[int, ...]:
    """Dense indices of a variable ranking; the canonical table order when none is given."""
    if ranking is None:
        return tuple(range(len(table)))
    if len(ranking) != len(table) or set(ranking) != set(table.variables):
        raise UsageError("Monomial order ranking must cover exactly the variable table")
    return tuple(table.index(v) for v in ranking)


class Comparison(Enum):
    """Result of a monomial comparison."""

    LT = -1
    EQ = 0
    GT = 1


class ArithOp(Enum):
    """Ring operations of poly_arith."""

    ADD = "add"
    SUB = "sub"
    MUL = "mul"


_ARITH = {ArithOp.ADD: operator.add, ArithOp.SUB: operator.sub, ArithOp.MUL: operator.mul}


class Poly:
    """A polynomial over a VarTable."""

    __slots__ = ("table", "expr")

    def __init__(self, table: VarTable, expr: PolyElement) -> None:
        if expr.ring != table.ring:
            raise InternalError("Polynomial ring does not belong to its variable table")
        self.table = table
        self.expr = expr

    @classmethod
    def constant(cls, table: VarTable, value: Any) -> "Poly":
        return cls(table, table.ring(value))

    @classmethod
    def variable(cls, table: VarTable, variable: Variable) -> "Poly":
        return cls(table, table.gen(variable))

    @classmethod
    def from_terms(cls, table: VarTable, terms: Iterable[tuple[Any, dict[Variable, int]]]) -> "Poly":
        """Build from (coefficient, {variable: exponent}) pairs."""
        expr = table.ring.zero
        for coeff, powers in terms:
            monom = [0] * len(table)
            for variable, exponent in powers.items():
                monom[table.index(variable)] += exponent
            expr += table.ring({tuple(monom): table.domain.convert(coeff)})
        return cls(table, expr)

    def _check(self, other: "Poly") -> None:
        if not isinstance(other, Poly):
            raise UsageError(f"Expected a Poly, got {type(other).__name__}")
        if other.table != self.table:
            raise UsageError("Polynomials belong to different variable tables")

    def __add__(self, other: "Poly") -> "Poly":
        return poly_arith(ArithOp.ADD, self, other)

    def __sub__(self, other: "Poly") -> "Poly":
        return poly_arith(ArithOp.SUB, self, other)

    def __mul__(self, other: "Poly") -> "Poly":
        return poly_arith(ArithOp.MUL, self, other)

    def __neg__(self) -> "Poly":
        return Poly(self.table, -self.expr)

    def __pow__(self, exponent: int) -> "Poly":
        return Poly(self.table, self.expr**exponent)

    def scale(self, factor: Any) -> "Poly":
        return Poly(self.table, self.expr.mul_ground(self.table.domain.convert(factor)))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poly) and other.table == self.table and other.expr == self.expr

    def __hash__(self) -> int:
        return hash((self.table, tuple(sorted(self.expr.items()))))

    def __bool__(self) -> bool:
        return bool(self.expr)

    def __repr__(self) -> str:
        return f"Poly({self.expr})"

    def __str__(self) -> str:
        return str(self.expr)

    @property
    def is_zero(self) -> bool:
        return not self.expr

    @property
    def is_constant(self) -> bool:
        return self.expr.is_ground

    def terms(self, order: Optional[MonomialOrder] = None) -> list[tuple[Any, Monomial]]:
        """(coefficient, monomial) pairs sorted descending by ``order`` (canonical lex by default)."""
        key = order.key if order is not None else None
        items = sorted(self.expr.items(), key=lambda item: key(item[0]) if key else item[0], reverse=True)
        return [(coeff, monom) for monom, coeff in items]

    def monomials(self) -> list[Monomial]:
        return [monom for _, monom in self.terms()]

    def leading_monomial(self, order: Optional[MonomialOrder] = None) -> Monomial:
        if not self.expr:
            raise UsageError("The zero polynomial has no leading monomial")
        return self.terms(order)[0][1]

    def leading_coefficient(self, order: Optional[MonomialOrder] = None) -> Any:
        if not self.expr:
            raise UsageError("The zero polynomial has no leading coefficient")
        return self.terms(order)[0][0]

    def variables(self) -> set[Variable]:
        """Variables that occur with a positive exponent."""
        used: set[Variable] = set()
        for monom in self.expr.keys():
            used.update(self.table.variables[i] for i, e in enumerate(monom) if e)
        return used

    def degree(self, variables: Optional[Iterable[Variable]] = None) -> int:
        """Total degree, optionally restricted to some variables; -1 for zero."""
        if not self.expr:
            return -1
        if variables is None:
            positions = range(len(self.table))
        else:
            positions = [self.table.index(v) for v in variables if v in self.table]
        return max(sum(monom[i] for i in positions) for monom in self.expr.keys())

    def degree_in(self, variable: Variable) -> int:
        if variable not in self.table:
            return 0 if self.expr else -1
        return self.expr.degree(self.table.gen(variable))

    def diff(self, variable: Variable) -> "Poly":
        return Poly(self.table, self.expr.diff(self.table.gen(variable)))

    def coeff_of_power(self, variable: Variable, exponent: int) -> "Poly":
        """The coefficient of ``variable**exponent`` as a polynomial free of ``variable``."""
        position = self.table.index(variable)
        terms = {}
        for monom, coeff in self.expr.items():
            if monom[position] == exponent:
                terms[monom[:position] + (0,) + monom[position + 1 :]] = coeff
        return Poly(self.table, self.table.ring.from_dict(terms))

    def to_table(self, table: VarTable) -> "Poly":
        """Re-home the polynomial in a table over a superset of its variables."""
        if table.is_fraction_mode and not self.table.is_fraction_mode:
            return Poly(table, table.absorb(self.expr, self.table))
        return Poly(table, table.embed(self.expr))

    def expand(self) -> "Poly":
        """Fraction-mode polynomial as a Q-coefficient polynomial (denominators cleared)."""
        table, expr = self.table.expand(self.expr)
        return Poly(table, expr)


def poly_arith(op: Union[ArithOp, str], f: Poly, g: Poly) -> Poly:
    """Exact ring operation on two polynomials of one table.

    Args:
        op: add, sub or mul
        f: first operand
        g: second operand

    Returns:
        The exact result

    Raises:
        UsageError: If the operands belong to different tables
    """
    f._check(g)
    return Poly(f.table, _ARITH[ArithOp(op)](f.expr, g.expr))


def monomial_compare(order: MonomialOrder, m1: Monomial, m2: Monomial) -> Comparison:
    """Compare two monomials (dense exponent tuples over ``order.table``).

    >>> t = make_table([Variable.independent("x", 0), Variable.independent("y", 1)])
    >>> monomial_compare(MonomialOrder.lex(t), (1, 2), (2, 0))
    <Comparison.LT: -1>
    """
    k1, k2 = order.key(m1), order.key(m2)
    if k1 == k2:
        return Comparison.EQ
    return Comparison.GT if k1 > k2 else Comparison.LT


def reduce_element(f: PolyElement, basis: Sequence[PolyElement], leading: Optional[Sequence[tuple]] = None) -> tuple[
    PolyElement, bool
]:
    """Full multivariate division of ``f`` by ``basis`` in their common (order) ring.

    Args:
        f: the dividend
        basis: nonzero divisors
        leading: cached (monomial, coefficient) leading terms of ``basis``

    Returns:
        (remainder, whether any reduction step happened)
    """
    ring = f.ring
    if leading is None:
        leading = [g.LT for g in basis]
    monomial_div = ring.monomial_div
    monomial_mul = ring.monomial_mul
    quo = ring.domain.quo
    zero = ring.domain.zero
    remainder = ring.zero
    reduced = False
    f = f.copy()
    get = f.get
    while f:
        lm = f.leading_expv()
        lc = f[lm]
        for g, (g_lm, g_lc) in zip(basis, leading):
            m = monomial_div(lm, g_lm)
            if m is not None:
                c = quo(lc, g_lc)
                for mg, cg in g.iterterms():
                    m1 = monomial_mul(mg, m)
                    c1 = get(m1, zero) - c * cg
                    if not c1:
                        del f[m1]
                    else:
                        f[m1] = c1
                reduced = True
                break
        else:
            remainder[lm] = lc
            del f[lm]
    return remainder, reduced


def poly_reduce(f: Poly, G: Sequence[Poly], order: MonomialOrder) -> tuple[Poly, bool]:
    """Remainder of ``f`` modulo ``G`` under ``order``.

    Args:
        f: the dividend
        G: nonempty list of divisors over the same table
        order: the monomial order deciding leading terms

    Returns:
        (remainder, reduced flag); no remainder monomial is divisible by a leading monomial of G

    Raises:
        UsageError: If G is empty or tables differ
    """
    if not G:
        raise UsageError("poly_reduce needs at least one divisor")
    for g in G:
        f._check(g)
    if order.table != f.table:
        raise UsageError("Monomial order belongs to a different variable table")
    basis = [order.to_order(g.expr) for g in G if g.expr]
    if not basis:
        return f, False
    remainder, reduced = reduce_element(order.to_order(f.expr), basis)
    return Poly(f.table, order.from_order(remainder)), reduced


def _is_negative(coeff: Any) -> bool:
    """Sign of a Q coefficient or of a fraction coefficient's leading numerator coefficient."""
    numer = getattr(coeff, "numer", None)
    if numer is not None and isinstance(numer, PolyElement):
        return numer.LC < 0
    return coeff < 0


def normalize_element(expr: PolyElement, key: Optional[Callable[[Monomial], Any]] = None) -> PolyElement:
    """Integer coefficients with content 1 and positive leading coefficient.

    For fraction coefficients, "integer" means polynomial in the coefficient variables with
    integer coefficients and content 1 over Z[coefficient variables].
    """
    if not expr:
        raise UsageError("Cannot normalize the zero polynomial")
    ring = expr.ring
    domain = ring.domain
    if domain.is_QQ:
        _, expr = expr.clear_denoms()
        _, expr = expr.primitive()
    else:
        field = domain.field
        common = functools.reduce(lambda a, b: a.lcm(b), [c.denom for c in expr.values()])
        numerators = {m: c.numer * common.exquo(c.denom) for m, c in expr.items()}
        content = functools.reduce(lambda a, b: a.gcd(b), numerators.values())
        numerators = {m: n.exquo(content) for m, n in numerators.items()}
        scale = functools.reduce(
            lambda a, b: QQ.lcm(a, b), [QQ.denom(c) for n in numerators.values() for c in n.values()], QQ.one
        )
        integral = {m: n.mul_ground(scale) for m, n in numerators.items()}
        gcd = functools.reduce(
            lambda a, b: QQ.gcd(a, b), [QQ.numer(c) for n in integral.values() for c in n.values()], QQ.zero
        )
        expr = ring.from_dict({m: field(n.quo_ground(gcd)) for m, n in integral.items()})
    lead = max(expr.keys(), key=key) if key is not None else expr.leading_expv()
    if _is_negative(expr[lead]):
        expr = -expr
    return expr


def poly_normalize(f: Poly, order: Optional[MonomialOrder] = None) -> Poly:
    """Canonical representative of ``f`` up to a nonzero constant.

    Args:
        f: a nonzero polynomial
        order: order deciding the leading coefficient (canonical lex when omitted)

    Returns:
        The polynomial with integer coefficients, content 1 and positive leading coefficient

    Raises:
        UsageError: If f is zero

    >>> t = make_table([Variable.independent("x")])
    >>> x = Poly.variable(t, Variable.independent("x"))
    >>> str(poly_normalize(x.scale(-2) * x + Poly.constant(t, 4)))
    'x**2 - 2'
    """
    if f.is_zero:
        raise UsageError("Cannot normalize the zero polynomial")
    key = order.key if order is not None else None
    return Poly(f.table, normalize_element(f.expr, key))


def poly_exact_divide(f: Poly, g: Poly) -> Optional[Poly]:
    """Exact quotient ``f / g`` or None when g does not divide f.

    Raises:
        UsageError: If g is zero or the tables differ
    """
    f._check(g)
    if g.is_zero:
        raise UsageError("Division by the zero polynomial")
    try:
        return Poly(f.table, f.expr.exquo(g.expr))
    except ExactQuotientFailed:
        return None
