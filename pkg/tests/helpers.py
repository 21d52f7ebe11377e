"""Comparison helpers and random inputs shared by the unit and golden tests."""

import random
from typing import Sequence

import sympy
from sympy.polys.domains import QQ

from src.algebra.groebner import Ideal
from src.algebra.polyring import MonomialOrder, Poly, Variable, VarTable, make_table
from src.frontend.parser import parse_ade


def as_expr(poly: Poly) -> sympy.Expr:
    """The polynomial as a sympy expression over the variable labels."""
    return poly.expr.as_expr()


def same_ade(poly: Poly, text: str, independents: Sequence[str], output: str = "z") -> bool:
    """Whether ``poly`` and the printed ADE ``text`` agree up to a nonzero constant factor."""
    expected = as_expr(parse_ade(text, independents, output))
    ratio = sympy.cancel(as_expr(poly) / expected)
    return ratio.is_number and ratio != 0


def divides(g: Poly, f: Poly) -> bool:
    """Whether g divides f as polynomials over Q."""
    quotient = sympy.cancel(as_expr(f) / as_expr(g))
    return sympy.fraction(quotient)[1].is_number


def _common(*polys: Poly) -> tuple[list[Poly], MonomialOrder]:
    variables = set()
    for f in polys:
        variables |= f.variables()
    table = make_table(variables)
    return [f.to_table(table) for f in polys], MonomialOrder.degrevlex(table)


def ideal_contains(G: Sequence[Poly], f: Poly) -> bool:
    """Whether f lies in the ideal generated by G, over the table of all variables they use."""
    polys, order = _common(*G, f)
    return polys[-1] in Ideal(polys[:-1], order)


def same_ideal(F: Sequence[Poly], G: Sequence[Poly]) -> bool:
    """Whether F and G generate the same ideal, over the table of all variables they use."""
    polys, order = _common(*F, *G)
    F, G = polys[: len(F)], polys[len(F) :]
    return all(g in Ideal(F, order) for g in G) and all(f in Ideal(G, order) for f in F)


def random_poly(rng: random.Random, table: VarTable, max_terms: int = 8, max_degree: int = 4) -> Poly:
    """A sparse polynomial with small rational coefficients over the variables of ``table``."""
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        powers: dict = {}
        for _ in range(rng.randint(0, max_degree)):
            variable = rng.choice(table.variables)
            powers[variable] = powers.get(variable, 0) + 1
        terms.append((QQ(rng.randint(-5, 5), rng.randint(1, 3)), powers))
    return Poly.from_terms(table, terms)


def random_table(rng: random.Random, max_variables: int = 5) -> VarTable:
    return make_table([Variable.independent(f"x{i}", i) for i in range(rng.randint(1, max_variables))])
