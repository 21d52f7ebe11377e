import random

import pytest
from sympy.polys.domains import QQ

from src.data_models.results import AdeResult
from src.engines.seriescheck import (
    Builtin,
    SeriesOp,
    TruncSeries,
    certify,
    derivative_series,
    evaluate_target,
    series_arith,
    series_builtin,
    series_ring,
)
from src.exceptions import UsageError
from src.frontend.parser import parse_ade, parse_system

LINEAR_ADE = "D[x,x,x](z) - D[x,x](z) + D[x](z) - z = 0"
SEPARANT_ADE = "D[x,x](z)^2 - 2*D[x](z)*D[x,x](z) + 2*D[x](z)^2 - 2*z*D[x](z) + z^2 - 2 = 0"

x = series_ring(["x"]).gens[0]


def series(expr, T=10):
    return TruncSeries.from_poly(["x"], T, expr)


def builtin(kind, T=10):
    return series_builtin(kind, series(x, T))


def ade(text, independents=("x",), degree=1):
    poly = parse_ade(text, independents)
    return AdeResult(polynomial=poly, independents=independents, order=0, degree=degree)


class TestArithmetic:
    def test_reciprocal(self):
        inverse = series_arith(SeriesOp.RECIPROCAL, series(1 - x))
        assert all(inverse.coefficient((k,)) == 1 for k in range(11))

    def test_reciprocal_needs_constant_term(self):
        with pytest.raises(UsageError):
            series_arith(SeriesOp.RECIPROCAL, series(x))

    def test_product_is_truncated(self):
        power = series(1 + x, 3) ** 5
        assert power.coefficient((3,)) == 10
        assert power.coefficient((4,)) == 0

    def test_product_matches_untruncated_product(self):
        rng = random.Random(2)
        ring = series_ring(["x1", "x2"])
        x1, x2 = ring.gens
        for _ in range(20):
            f = sum((rng.randint(-3, 3) * x1**i * x2**j for i in range(4) for j in range(4)), ring.zero)
            g = sum((rng.randint(-3, 3) * x1**i * x2**j for i in range(4) for j in range(4)), ring.zero)
            expected = TruncSeries.from_poly(["x1", "x2"], 5, f * g)
            product = TruncSeries.from_poly(["x1", "x2"], 5, f) * TruncSeries.from_poly(["x1", "x2"], 5, g)
            assert product.expr == expected.expr

    def test_derivation_lowers_trusted_degree(self):
        derived = derivative_series(series(x**3), (2,))
        assert derived.trusted == 8
        assert derived.expr == 6 * x

    def test_mismatched_truncation(self):
        with pytest.raises(UsageError):
            series(x, 5) + series(x, 6)

    def test_missing_operand(self):
        with pytest.raises(UsageError):
            series_arith(SeriesOp.ADD, series(x))


class TestBuiltins:
    def test_exp(self):
        assert builtin(Builtin.EXP).coefficient((3,)) == QQ(1, 6)

    def test_sin_and_cos(self):
        sin, cos = builtin(Builtin.SIN), builtin(Builtin.COS)
        assert sin.coefficient((3,)) == QQ(-1, 6)
        assert cos.coefficient((4,)) == QQ(1, 24)
        assert (sin * sin + cos * cos).expr == series_ring(["x"]).one

    def test_bivariate_exp(self):
        x1, x2 = series_ring(["x1", "x2"]).gens
        value = series_builtin(Builtin.EXP, TruncSeries.from_poly(["x1", "x2"], 6, x1 + x2))
        assert value.coefficient((1, 1)) == 1
        assert value.coefficient((2, 1)) == QQ(1, 2)

    def test_argument_must_vanish_at_origin(self):
        with pytest.raises(UsageError):
            series_builtin(Builtin.EXP, series(1 + x))


class TestCertify:
    def cos_plus_exp(self, T=20):
        return {"z": builtin(Builtin.COS, T) + builtin(Builtin.EXP, T)}

    def test_accepts_a_solution(self):
        assert certify(ade(SEPARANT_ADE, degree=2), self.cos_plus_exp())
        assert certify(ade(LINEAR_ADE), self.cos_plus_exp())

    def test_sum_of_annihilators(self):
        combined = LINEAR_ADE.replace(" = 0", "") + " + " + SEPARANT_ADE
        assert certify(ade(combined, degree=2), self.cos_plus_exp())

    def test_rejects_a_non_solution(self):
        assert not certify(ade(SEPARANT_ADE, degree=2), {"z": builtin(Builtin.EXP, 20)})

    def test_parameters(self):
        assert certify(ade("D[x](z) - a*z = 0"), {"z": builtin(Builtin.EXP)}, {"a": 1})
        with pytest.raises(UsageError):
            certify(ade("D[x](z) - a*z = 0"), {"z": builtin(Builtin.EXP)})

    def test_truncation_too_small(self):
        with pytest.raises(UsageError):
            certify(ade(SEPARANT_ADE, degree=2), self.cos_plus_exp(T=4))

    def test_missing_output_series(self):
        with pytest.raises(UsageError):
            certify(ade(LINEAR_ADE), {"y": builtin(Builtin.EXP)})


def test_evaluate_target():
    parsed = parse_system("D[x](y1)^2 + y1^2 - 1 = 0; D[x](y2) = y2; z = y1 + y2")
    assignment = {"y1": builtin(Builtin.COS), "y2": builtin(Builtin.EXP)}
    value = evaluate_target(parsed.target.expr, assignment)
    assert value.expr == (builtin(Builtin.COS) + builtin(Builtin.EXP)).expr
