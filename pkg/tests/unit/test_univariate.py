import dataclasses

import pytest

from src.algebra.diffalg import flatten
from src.algebra.polyring import Poly, Variable, make_table
from src.data_models.options import CoefficientMode, LhoMode, Ordering, UniOptions
from src.engines.univariate import (
    SEPARANTS_ZEROS_WARNING,
    arithmetic_uni,
    derivatives,
    finish,
    plan_uni,
    resolve_path,
    select_min,
    unary_uni,
)
from src.exceptions import UsageError
from src.frontend.parser import parse_system
from src.frontend.printer import print_ade
from tests.helpers import same_ideal

Z = [Variable.derivative("z", (k,)) for k in range(3)]
TABLE = make_table(Z)
z0, z1, z2 = (Poly.variable(TABLE, v) for v in Z)
ONE = Poly.constant(TABLE, 1)

SCALED_EXP = "D[x](y) = y; z = 2*y"
CIRCLE_AND_EXP = "D[x](y1)^2 + y1^2 - 1 = 0; D[x](y2) = y2; z = y1 + y2"


class TestSelectMin:
    def test_lower_order_wins(self):
        assert select_min([z2 - z0, z1 * z1 * z1 - ONE]) == z1 * z1 * z1 - ONE

    def test_lower_degree_wins(self):
        assert select_min([z1 - z0, z1 * z1 - z0]) == z1 - z0

    def test_single_candidate(self):
        assert select_min([z0]) == z0

    def test_empty(self):
        with pytest.raises(UsageError):
            select_min([])


def test_derivatives():
    parsed = parse_system(SCALED_EXP)
    result = derivatives(parsed.ades[0].poly, 3)
    assert len(result) == 4
    assert result[0] == parsed.ades[0].poly


def test_finish_normalizes_and_compacts():
    x = Variable.independent("x")
    table = make_table(Z + [x])
    poly = Poly.variable(table, Z[1]).scale(-2) + Poly.variable(table, Z[0]).scale(4)
    compact = make_table(Z[:2])
    expected = Poly.variable(compact, Z[1]) - Poly.variable(compact, Z[0]).scale(2)
    assert finish(poly) == expected


class TestResolvePath:
    @pytest.fixture
    def ades(self):
        return parse_system(CIRCLE_AND_EXP).ades

    def test_auto_picks_separant_path(self, ades):
        _, lho_path, strategy = resolve_path(ades, UniOptions())
        assert not lho_path
        assert strategy is Ordering.LEXDEG

    def test_lhoplex(self, ades):
        _, lho_path, strategy = resolve_path(ades, UniOptions(lhoplex=True))
        assert not lho_path
        assert strategy is Ordering.LEX

    def test_diff_first(self, ades):
        derived, lho_path, strategy = resolve_path(ades, UniOptions(diff_first=True))
        assert lho_path
        assert strategy is Ordering.LEX
        assert [ade.n for ade in derived] == [2, 1]
        assert all(ade.lho for ade in derived)

    def test_forced_separant_path_on_lho_inputs(self):
        ades = parse_system(SCALED_EXP).ades
        _, lho_path, strategy = resolve_path(ades, UniOptions(lho_mode=LhoMode.FORCE_NONLHO))
        assert not lho_path
        assert strategy is Ordering.LEXDEG

    def test_explicit_ordering(self, ades):
        _, _, strategy = resolve_path(ades, UniOptions(ordering=Ordering.LEX))
        assert strategy is Ordering.LEX


class TestArithmetic:
    def test_scaled_exponential(self):
        parsed = parse_system(SCALED_EXP)
        res = arithmetic_uni(parsed.ades, parsed.target.expr)
        assert print_ade(res) == "D[x](z) - z = 0"
        assert (res.order, res.degree) == (1, 1)
        assert res.options["path"] == "lho"
        assert res.options["ordering"] == "lex"
        assert res.stats is not None

    def test_unary_matches_arithmetic(self):
        parsed = parse_system(SCALED_EXP)
        unary = unary_uni(parsed.ades[0], parsed.target.expr)
        assert unary.polynomial == arithmetic_uni(parsed.ades, parsed.target.expr).polynomial

    def test_fraction_coefficients(self):
        parsed = parse_system("D[x](y) = x*y; z = y^2")
        opts = UniOptions(coefficients=CoefficientMode.FRACTION)
        res = arithmetic_uni(parsed.ades, parsed.target.expr, opts)
        assert print_ade(res) == "D[x](z) - 2*x*z = 0"

    def test_output_name(self):
        parsed = parse_system("D[x](y) = y; w = y + 1")
        res = arithmetic_uni(parsed.ades, parsed.target.expr, output=parsed.target.name)
        assert res.output == "w"
        assert print_ade(res) == "D[x](w) - w + 1 = 0"

    def test_separants_zeros_warns(self):
        parsed = parse_system(CIRCLE_AND_EXP)
        res = arithmetic_uni(parsed.ades, parsed.target.expr, UniOptions(separants_zeros=True))
        assert SEPARANTS_ZEROS_WARNING in res.warnings


QUOTIENT = "D[x](y1)^2 + y1^2 - 1 = 0; D[x](y2) = y2; D[x](y3)^3 + D[x](y3)^2 + 3 = 0; z = y1*y3/y2"


class TestPlan:
    def test_only_states_are_eliminated(self):
        parsed = parse_system(QUOTIENT)
        plan = plan_uni(parsed.ades, parsed.target.expr)
        context = plan.system.context
        states = {context.descriptor(name, (k,)) for name, k in [("y1", 0), ("y1", 1), ("y2", 0), ("y3", 0), ("y3", 1)]}
        assert set(plan.problem.table) - plan.problem.keep == states
        assert len(plan.problem.generators) == 2 + plan.system.M + 1
        assert plan.problem.saturate_by is not None
        assert not plan.lho_path
        assert plan.strategy is Ordering.LEXDEG

    def test_lho_inputs_contribute_no_relation(self):
        parsed = parse_system(SCALED_EXP)
        plan = plan_uni(parsed.ades, parsed.target.expr)
        assert plan.lho_path
        assert len(plan.problem.generators) == plan.system.M + 1

    def test_separants_zeros_derives_the_relations(self):
        parsed = parse_system(CIRCLE_AND_EXP)
        plan = plan_uni(parsed.ades, parsed.target.expr, UniOptions(separants_zeros=True))
        context = plan.system.context
        assert context.descriptor("y1", (2,)) in set(plan.problem.table)
        assert plan.warnings == (SEPARANTS_ZEROS_WARNING,)

    @pytest.mark.parametrize(
        "text", [CIRCLE_AND_EXP, "D[x](y1)^2 - y1 = 0; D[x](y2) = x*y2; z = y1*y2", "D[x](y)^2 = y^3; z = y + 1/y"]
    )
    def test_state_relations_match_derived_relations(self, text):
        parsed = parse_system(text)
        plan = plan_uni(parsed.ades, parsed.target.expr)
        derived = plan_uni(parsed.ades, parsed.target.expr, UniOptions(separants_zeros=True)).problem
        saturated = dataclasses.replace(derived, saturate_by=flatten(plan.system.H, derived.table))
        state_ideal, derived_ideal = plan.problem.solve(plan.strategy), saturated.solve(plan.strategy)
        assert state_ideal and derived_ideal
        assert same_ideal(state_ideal, derived_ideal)
