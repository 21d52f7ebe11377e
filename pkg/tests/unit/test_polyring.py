import random

import pytest
from sympy.polys.domains import QQ

from src.algebra.polyring import (
    ArithOp,
    Comparison,
    MonomialOrder,
    Poly,
    Variable,
    VarTable,
    make_table,
    monomial_compare,
    poly_arith,
    poly_exact_divide,
    poly_normalize,
    poly_reduce,
)
from src.algebra.groebner import Ideal
from src.exceptions import UsageError
from tests.helpers import random_poly, random_table

x = Variable.independent("x", 0)
y = Variable.independent("y", 1)


@pytest.fixture
def xy():
    table = make_table([x, y])
    return table, Poly.variable(table, x), Poly.variable(table, y)


def one(table):
    return Poly.constant(table, 1)


class TestVariable:
    def test_labels(self):
        assert Variable.derivative("y", (1, 2)).label == "y[1,2]"
        assert Variable.parameter("c").label == "c"

    @pytest.mark.parametrize("index", [(), (-1,), (0, -2)])
    def test_invalid_derivative_index(self, index):
        with pytest.raises(UsageError):
            Variable.derivative("y", index)

    def test_table_ranks_derivatives_above_independents_above_parameters(self):
        c = Variable.parameter("c")
        y0 = Variable.derivative("y", (0,))
        table = make_table([c, x, y0])
        assert table.variables == (y0, x, c)

    def test_derivatives_follow_graded_colex(self):
        y10 = Variable.derivative("y", (1, 0))
        y01 = Variable.derivative("y", (0, 1))
        y20 = Variable.derivative("y", (2, 0))
        assert make_table([y10, y01, y20]).variables == (y20, y01, y10)

    def test_duplicate_labels_rejected(self):
        with pytest.raises(UsageError):
            VarTable([Variable.independent("x"), Variable.parameter("x")])


class TestArithmetic:
    def test_difference_of_squares(self, xy):
        _, X, Y = xy
        assert (X + Y) * (X - Y) == X * X - Y * Y
        assert poly_arith("mul", X + Y, X - Y) == poly_arith(ArithOp.SUB, X * X, Y * Y)

    def test_tables_must_match(self, xy):
        _, X, _ = xy
        other = make_table([x])
        with pytest.raises(UsageError):
            X + Poly.variable(other, x)

    def test_degrees_and_coefficients(self, xy):
        _, X, Y = xy
        f = X * X * Y + Y
        assert f.degree() == 3
        assert f.degree_in(x) == 2
        assert f.coeff_of_power(x, 2) == Y
        assert f.coeff_of_power(x, 0) == Y
        assert f.variables() == {x, y}

    def test_fraction_mode_expand_restores_polynomial(self):
        y0 = Variable.derivative("y", (0,))
        full = make_table([y0, x])
        fraction = make_table([y0], [x])
        f = Poly.variable(full, x) * Poly.variable(full, y0) + one(full)
        assert fraction.is_fraction_mode
        assert f.to_table(fraction).expand() == f


    def test_ring_axioms_on_random_polynomials(self):
        rng = random.Random(7)
        for _ in range(200):
            table = random_table(rng)
            f, g, h = (random_poly(rng, table) for _ in range(3))
            assert f + g == g + f
            assert (f + g) + h == f + (g + h)
            assert f * g == g * f
            assert (f * g) * h == f * (g * h)
            assert f * (g + h) == f * g + f * h
            assert f + Poly.constant(table, 0) == f
            assert f * one(table) == f
            assert (f - f).is_zero


class TestMonomialOrders:
    def test_lex(self, xy):
        table, _, _ = xy
        order = MonomialOrder.lex(table)
        assert monomial_compare(order, (1, 2), (2, 0)) is Comparison.LT
        assert monomial_compare(order, (1, 0), (1, 0)) is Comparison.EQ

    def test_degrevlex_compares_total_degree_first(self, xy):
        table, _, _ = xy
        assert monomial_compare(MonomialOrder.degrevlex(table), (1, 2), (2, 0)) is Comparison.GT

    def test_explicit_ranking(self, xy):
        table, _, _ = xy
        order = MonomialOrder.lex(table, [y, x])
        assert monomial_compare(order, (1, 0), (0, 1)) is Comparison.LT

    def test_block_order(self, xy):
        table, _, _ = xy
        order = MonomialOrder.block(table, [x], [y])
        assert monomial_compare(order, (1, 0), (0, 5)) is Comparison.GT

    def test_block_overlap_rejected(self, xy):
        table, _, _ = xy
        with pytest.raises(UsageError):
            MonomialOrder.block(table, [x], [x, y])

    def test_partial_ranking_rejected(self, xy):
        table, _, _ = xy
        with pytest.raises(UsageError):
            MonomialOrder.lex(table, [x])


class TestReduction:
    def test_remainder(self, xy):
        table, X, Y = xy
        f = X * X * Y + X * Y * Y + Y * Y
        G = [X * Y - one(table), Y * Y - one(table)]
        remainder, reduced = poly_reduce(f, G, MonomialOrder.lex(table))
        assert remainder == X + Y + one(table)
        assert reduced

    def test_no_divisors(self, xy):
        table, X, _ = xy
        with pytest.raises(UsageError):
            poly_reduce(X, [], MonomialOrder.lex(table))


    def test_random_remainders_are_irreducible(self):
        rng = random.Random(11)
        for _ in range(100):
            table = random_table(rng, 3)
            order = rng.choice([MonomialOrder.lex, MonomialOrder.degrevlex])(table)
            G = [g for g in (random_poly(rng, table, 4, 3) for _ in range(2)) if not g.is_zero]
            if not G:
                continue
            f = random_poly(rng, table)
            remainder, _ = poly_reduce(f, G, order)
            leading = [g.leading_monomial(order) for g in G]
            for monom in remainder.monomials():
                assert not any(all(e >= l for e, l in zip(monom, lm)) for lm in leading)
            assert (f - remainder) in Ideal(G, order)


class TestNormalization:
    def test_clears_denominators(self, xy):
        table, X, Y = xy
        f = Poly.from_terms(table, [(QQ(1, 2), {x: 1}), (QQ(-3, 2), {y: 1})])
        assert poly_normalize(f) == X - Y.scale(3)

    def test_positive_leading_coefficient(self, xy):
        _, X, Y = xy
        assert poly_normalize(Y - X) == X - Y

    def test_zero_rejected(self, xy):
        table, _, _ = xy
        with pytest.raises(UsageError):
            poly_normalize(Poly.constant(table, 0))


class TestExactDivision:
    def test_divides(self, xy):
        _, X, Y = xy
        assert poly_exact_divide(X * X - Y * Y, X - Y) == X + Y

    def test_does_not_divide(self, xy):
        _, X, Y = xy
        assert poly_exact_divide(X, Y) is None

    def test_division_by_zero(self, xy):
        table, X, _ = xy
        with pytest.raises(UsageError):
            poly_exact_divide(X, Poly.constant(table, 0))

    def test_random_products(self):
        rng = random.Random(13)
        for _ in range(200):
            table = random_table(rng)
            f, g = random_poly(rng, table), random_poly(rng, table)
            if g.is_zero:
                continue
            assert poly_exact_divide(f * g, g) == f
