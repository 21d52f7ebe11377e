"""Gröbner bases, saturation, elimination and ideal membership.

The native backend is Buchberger's algorithm with normal pair selection and the
Gebauer-Möller pair criteria, working on sympy ``PolyElement`` objects in the
ring that realizes the requested monomial order. sympy's own ``buchberger`` and
``f5b`` implementations can be selected instead (see ``GroebnerBudget.method``).
"""

import heapq
import logging
import time
from dataclasses import dataclass
from typing import Any, Iterable, Optional, Sequence, Union

from sympy.polys.groebnertools import groebner as sympy_groebner
from sympy.polys.rings import PolyElement

from src.algebra.polyring import (
    MonomialOrder,
    OrderKind,
    Poly,
    Variable,
    VarKind,
    VarTable,
    normalize_element,
    reduce_element,
)
from src.algebra.utils import NATIVE, GroebnerBudget, get_budget
from src.data_models.options import Ordering
from src.data_models.stats import GroebnerStats
from src.exceptions import BudgetExceededError, InternalError, UsageError


def spoly(f: PolyElement, g: PolyElement) -> PolyElement:
    """S-polynomial of two monic polynomials."""
    ring = f.ring
    lmf, lmg = f.LM, g.LM
    lcm = ring.monomial_lcm(lmf, lmg)
    return f.mul_monom(ring.monomial_div(lcm, lmf)) - g.mul_monom(ring.monomial_div(lcm, lmg))


def _coeff_bits(expr: PolyElement) -> int:
    """Largest numerator/denominator bit-size among the coefficients."""
    bits = 0
    for coeff in expr.values():
        numer = getattr(coeff, "numer", None)
        if isinstance(numer, PolyElement):
            rationals: Iterable[Any] = list(numer.values()) + list(coeff.denom.values())
        else:
            rationals = [coeff]
        for q in rationals:
            bits = max(bits, int(q.numerator).bit_length(), int(q.denominator).bit_length())
    return bits


class _Buchberger:
    """One native Buchberger run over the ring of a monomial order."""

    def __init__(self, budget: GroebnerBudget, stats: GroebnerStats) -> None:
        self.budget = budget
        self.stats = stats
        self.start = time.monotonic()
        self.G: list[PolyElement] = []
        self.leading: list[tuple] = []
        self.live: set[tuple[int, int]] = set()
        self.queue: list[tuple[Any, int, int]] = []

    def _check_budget(self) -> None:
        self.stats.elapsed_s = time.monotonic() - self.start
        if self.stats.pairs_reduced >= self.budget.max_pairs:
            raise BudgetExceededError(
                f"Gröbner basis computation exceeded {self.budget.max_pairs} S-pairs", self.stats.model_dump()
            )
        if self.budget.time_limit_s and self.stats.elapsed_s > self.budget.time_limit_s:
            raise BudgetExceededError(
                f"Gröbner basis computation exceeded {self.budget.time_limit_s}s", self.stats.model_dump()
            )

    def _check_bits(self, expr: PolyElement) -> None:
        bits = _coeff_bits(expr)
        self.stats.max_coeff_bits = max(self.stats.max_coeff_bits, bits)
        if self.budget.max_coeff_bits and bits > self.budget.max_coeff_bits:
            raise BudgetExceededError(
                f"Coefficient size {bits} bits exceeds the limit of {self.budget.max_coeff_bits}",
                self.stats.model_dump(),
            )

    def update(self, f: PolyElement) -> None:
        """Add f to the basis, pruning old pairs and creating new ones with the Gebauer-Möller criteria."""
        ring = f.ring
        lcm = ring.monomial_lcm
        mul = ring.monomial_mul
        div = ring.monomial_div
        lmG = [lt[0] for lt in self.leading]
        lmf = f.LM
        k = len(self.G)

        stale = set()
        for i, j in self.live:
            lcm_ij = lcm(lmG[i], lmG[j])
            if div(lcm_ij, lmf) and lcm_ij != lcm(lmG[i], lmf) and lcm_ij != lcm(lmG[j], lmf):
                stale.add((i, j))
        self.live -= stale

        lcm_dict: dict[tuple, list[int]] = {}
        for i in range(k):
            lcm_dict.setdefault(lcm(lmG[i], lmf), []).append(i)
        minimalized_lcms: list[tuple] = []
        for L in sorted(lcm_dict.keys(), key=ring.order):
            if all(not div(L, L_) for L_ in minimalized_lcms):
                minimalized_lcms.append(L)
        for L in minimalized_lcms:
            # product criterion: coprime leading monomials need no pair
            if not any(L == mul(lmG[i], lmf) for i in lcm_dict[L]):
                i = min(lcm_dict[L])
                self.live.add((i, k))
                heapq.heappush(self.queue, (ring.order(L), i, k))
                self.stats.pairs_created += 1

        self.G.append(f)
        self.leading.append(f.LT)

    def run(self, F: Sequence[PolyElement]) -> list[PolyElement]:
        for f in F:
            if f:
                self.update(f.monic())
        while self.live:
            _, i, j = heapq.heappop(self.queue)
            if (i, j) not in self.live:
                continue
            self.live.remove((i, j))
            self._check_budget()
            r, _ = reduce_element(spoly(self.G[i], self.G[j]), self.G, self.leading)
            self.stats.pairs_reduced += 1
            if r:
                r = r.monic()
                self._check_bits(r)
                self.update(r)
                if r.is_ground:
                    break
            else:
                self.stats.zero_reductions += 1
        return interreduce(minimalize(self.G))


def minimalize(G: Sequence[PolyElement]) -> list[PolyElement]:
    """Minimal Gröbner basis from an arbitrary one."""
    if not G:
        return []
    ring = G[0].ring
    Gmin: list[PolyElement] = []
    for f in sorted(G, key=lambda h: ring.order(h.LM)):
        if all(not ring.monomial_div(f.LM, g.LM) for g in Gmin):
            Gmin.append(f)
    return Gmin


def interreduce(G: Sequence[PolyElement]) -> list[PolyElement]:
    """Reduced Gröbner basis from a minimal one."""
    Gred = []
    for i in range(len(G)):
        others = list(G[:i]) + list(G[i + 1 :])
        g = reduce_element(G[i], others)[0] if others else G[i]
        Gred.append(g.monic())
    return Gred


def check_buchberger_criterion(G: Sequence[PolyElement]) -> bool:
    """Whether every S-polynomial of G reduces to zero modulo G.

    Pairs with coprime leading monomials are skipped (they always reduce to zero).
    """
    if len(G) < 2:
        return True
    ring = G[0].ring
    leading = [g.LT for g in G]
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            lmi, lmj = leading[i][0], leading[j][0]
            if ring.monomial_lcm(lmi, lmj) == ring.monomial_mul(lmi, lmj):
                continue
            if reduce_element(spoly(G[i].monic(), G[j].monic()), G, leading)[0]:
                return False
    return True


def _basis_elements(
    F: Sequence[PolyElement], budget: GroebnerBudget, stats: GroebnerStats
) -> list[PolyElement]:
    """Reduced monic Gröbner basis of F, all elements in one order ring."""
    start = time.monotonic()
    F = [f for f in F if f]
    if not F:
        return []
    if any(f.is_ground for f in F):
        return [F[0].ring.one]
    if budget.method == NATIVE:
        G = _Buchberger(budget, stats).run(F)
    else:
        G = sympy_groebner(list(F), F[0].ring, method=budget.method)
    stats.method = budget.method
    stats.basis_size = len(G)
    stats.elapsed_s = time.monotonic() - start
    logging.debug(
        "Gröbner basis (%s): %d generators, %d variables, %d pairs reduced, %d to zero, basis size %d, %.2fs",
        stats.method,
        stats.generators,
        stats.variables,
        stats.pairs_reduced,
        stats.zero_reductions,
        stats.basis_size,
        stats.elapsed_s,
    )
    if budget.verify and not check_buchberger_criterion(G):
        raise InternalError(f"Gröbner basis from backend '{budget.method}' fails the Buchberger criterion")
    return G


def groebner_basis(
    F: Sequence[Poly],
    order: MonomialOrder,
    budget: Optional[GroebnerBudget] = None,
    stats: Optional[GroebnerStats] = None,
) -> list[Poly]:
    """Reduced Gröbner basis of the ideal generated by F.

    Args:
        F: generators over ``order.table``; zero generators are ignored
        order: the monomial order
        budget: resource limits; the configured budget when omitted
        stats: counters to fill in

    Returns:
        The reduced basis, each element normalized (integer, content 1, positive leading coefficient),
        sorted by ascending leading monomial

    Raises:
        UsageError: If a generator belongs to another table
        BudgetExceededError: If the budget is exhausted
    """
    budget = budget or get_budget()
    stats = stats if stats is not None else GroebnerStats()
    for f in F:
        if f.table != order.table:
            raise UsageError("Generators must share the monomial order's variable table")
    stats.variables = len(order.table)
    stats.generators = len(F)
    G = _basis_elements([order.to_order(f.expr) for f in F], budget, stats)
    G = sorted(G, key=lambda g: order.ring.order(g.LM))
    return [Poly(order.table, order.from_order(normalize_element(g))) for g in G]


class Ideal:
    """An ideal with a fixed monomial order and a lazily computed Gröbner basis."""

    def __init__(self, generators: Sequence[Poly], order: MonomialOrder) -> None:
        self.generators = [g for g in generators if not g.is_zero]
        self.order = order
        self.gb_cache: Optional[list[Poly]] = None

    def __repr__(self) -> str:
        return f"Ideal({', '.join(map(str, self.generators))})"

    def groebner_basis(self, budget: Optional[GroebnerBudget] = None) -> list[Poly]:
        if self.gb_cache is None:
            self.gb_cache = groebner_basis(self.generators, self.order, budget)
        return self.gb_cache

    def __contains__(self, f: Poly) -> bool:
        return ideal_member(f, self)


def ideal_member(f: Poly, I: Ideal, budget: Optional[GroebnerBudget] = None) -> bool:
    """Whether f lies in I.

    >>> from src.algebra.polyring import make_table
    >>> x, y = Variable.independent("x", 0), Variable.independent("y", 1)
    >>> t = make_table([x, y])
    >>> X, Y = Poly.variable(t, x), Poly.variable(t, y)
    >>> ideal_member(X * X - Y * Y, Ideal([X - Y], MonomialOrder.lex(t)))
    True
    """
    if f.table != I.order.table:
        raise UsageError("Polynomial and ideal belong to different variable tables")
    if f.is_zero:
        return True
    gb = I.groebner_basis(budget)
    if not gb:
        return False
    remainder, _ = reduce_element(I.order.to_order(f.expr), [I.order.to_order(g.expr) for g in gb])
    return not remainder


def _auxiliary_for(table: VarTable) -> Variable:
    """A fresh auxiliary variable for saturation."""
    names = {v.label for v in table.variables}
    name = "_t"
    while name in names:
        name = "_" + name
    return Variable.auxiliary(name)


def saturate(
    F: Sequence[Poly], H: Poly, order: MonomialOrder, budget: Optional[GroebnerBudget] = None
) -> list[Poly]:
    """Generators of the saturation ⟨F⟩ : H^∞, as a reduced Gröbner basis under ``order``.

    Adjoins an auxiliary variable t with 1 - t·H, ranks t above every original variable and keeps
    the basis elements free of t.

    Raises:
        UsageError: If H is zero
        BudgetExceededError: If the budget is exhausted
    """
    if H.is_zero:
        raise UsageError("Cannot saturate by the zero polynomial")
    if H.is_constant:
        return groebner_basis(F, order, budget)
    table = order.table
    t = _auxiliary_for(table)
    work = table.extend([t])
    T = Poly.variable(work, t)
    generators = [f.to_table(work) for f in F] + [Poly.constant(work, 1) - T * H.to_table(work)]
    ranked = list(order.ranked_variables)
    if order.kind is OrderKind.LEX:
        work_order = MonomialOrder.lex(work, [t] + ranked)
    else:
        work_order = MonomialOrder.block(work, [t], ranked, OrderKind.LEX, OrderKind.DEGREVLEX)
    G = groebner_basis(generators, work_order, budget)
    free = [Poly(table, table.embed(g.expr)) for g in G if t not in g.variables()]
    if order.kind is OrderKind.BLOCK:
        return groebner_basis(free, order, budget)
    return free


def elimination_order(
    table: VarTable,
    eliminated: Sequence[Variable],
    kept: Sequence[Variable],
    strategy: Union[Ordering, str] = Ordering.LEX,
) -> MonomialOrder:
    """Monomial order with ``eliminated`` above ``kept``; both lists ranked highest first."""
    if isinstance(strategy, str):
        strategy = Ordering[strategy.upper()]
    if strategy is Ordering.LEX:
        return MonomialOrder.lex(table, list(eliminated) + list(kept))
    return MonomialOrder.block(table, eliminated, kept)


def eliminate(
    F: Sequence[Poly],
    keep: Iterable[Variable],
    strategy: Union[Ordering, str] = Ordering.LEX,
    order_hints: Optional[Sequence[Variable]] = None,
    saturate_by: Optional[Poly] = None,
    budget: Optional[GroebnerBudget] = None,
    stats: Optional[GroebnerStats] = None,
) -> list[Poly]:
    """Generators of ⟨F⟩ ∩ K[keep], optionally of (⟨F⟩ : H^∞) ∩ K[keep] in the same Gröbner run.

    Args:
        F: generators over one table
        keep: variables to keep; every independent variable and parameter of the table must be kept
        strategy: lex (eliminated block above kept block) or lexdeg (Block(degrevlex, degrevlex))
        order_hints: ranking of eliminated variables, highest first; others follow in canonical order
        saturate_by: H of the saturation; the auxiliary variable joins the eliminated block on top
        budget: resource limits
        stats: counters to fill in

    Returns:
        The elements of the Gröbner basis supported on ``keep``, over the input table

    Raises:
        UsageError: If F is empty, tables differ, or an independent variable or parameter is not kept
        BudgetExceededError: If the budget is exhausted
    """
    if not F:
        raise UsageError("eliminate needs at least one generator")
    table = F[0].table
    for f in F:
        if f.table != table:
            raise UsageError("Generators must share one variable table")
    keep = set(keep)
    for v in keep:
        if v not in table:
            raise UsageError(f"Kept variable {v} is not in the variable table")
    for v in table:
        if v.kind in (VarKind.INDEPENDENT, VarKind.PARAMETER) and v not in keep:
            raise UsageError(f"Independent variables and parameters cannot be eliminated: {v}")

    hinted = [v for v in (order_hints or ()) if v in table and v not in keep]
    eliminated = hinted + [v for v in table if v not in keep and v not in hinted]
    kept = [v for v in table if v in keep]

    work = table
    generators = list(F)
    if saturate_by is not None and not saturate_by.is_constant:
        t = _auxiliary_for(table)
        work = table.extend([t])
        T = Poly.variable(work, t)
        generators = [f.to_table(work) for f in F] + [Poly.constant(work, 1) - T * saturate_by.to_table(work)]
        eliminated = [t] + eliminated

    order = elimination_order(work, eliminated, kept, strategy)
    logging.info(
        "Eliminating %d of %d variables with %s (%d generators%s)",
        len(eliminated),
        len(work),
        order.kind.name.lower(),
        len(generators),
        ", saturating" if work is not table else "",
    )
    G = groebner_basis(generators, order, budget, stats)
    keep_set = set(kept)
    return [Poly(table, table.embed(g.expr)) for g in G if g.variables() <= keep_set]


@dataclass(frozen=True)
class EliminationProblem:
    """Generators, kept variables and saturating polynomial of one elimination run."""

    generators: tuple[Poly, ...]
    keep: frozenset[Variable]
    order_hints: tuple[Variable, ...] = ()
    saturate_by: Optional[Poly] = None

    @property
    def table(self) -> VarTable:
        return self.generators[0].table

    def solve(
        self,
        strategy: Union[Ordering, str] = Ordering.LEX,
        budget: Optional[GroebnerBudget] = None,
        stats: Optional[GroebnerStats] = None,
    ) -> list[Poly]:
        """The elimination ideal's generators under ``strategy`` (see ``eliminate``)."""
        return eliminate(self.generators, self.keep, strategy, self.order_hints, self.saturate_by, budget, stats)
