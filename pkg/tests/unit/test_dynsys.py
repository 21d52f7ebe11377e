import pytest

from src.algebra.diffalg import DiffContext, DiffFraction, DiffIndeterminate, DiffPoly
from src.engines.dynsys import (
    InputAde,
    build_state_system,
    decompose_lho,
    exact_quotient,
    lie_derive,
    poly_lcm,
    state_derivation,
    system_polynomials,
)
from src.exceptions import InternalError, UnsupportedInputError

CONTEXT = DiffContext(
    ("x",),
    tuple(DiffIndeterminate(name, ("x",), ordinal) for ordinal, name in enumerate(["y1", "y2", "y3"])),
)


def d(name: str, k: int = 0) -> DiffPoly:
    return DiffPoly.descriptor(CONTEXT, name, (k,))


CIRCLE = d("y1", 1) * d("y1", 1) + d("y1") * d("y1") - 1
EXPONENTIAL = d("y2", 1) - d("y2")
CUBIC = d("y3", 1) ** 3 + d("y3", 1) ** 2 + 3


class TestDecompose:
    def test_circle(self):
        m, initial, rest = decompose_lho(CIRCLE)
        assert m == 2
        assert initial == DiffPoly.constant(CONTEXT, 1)
        assert rest == d("y1") * d("y1") - 1

    def test_linear(self):
        m, initial, rest = decompose_lho(EXPONENTIAL)
        assert (m, initial, rest) == (1, DiffPoly.constant(CONTEXT, 1), -d("y2"))

    def test_cubic(self):
        m, initial, rest = decompose_lho(CUBIC)
        assert m == 3
        assert rest == d("y3", 1) ** 2 + 3

    def test_nonconstant_initial(self):
        m, initial, rest = decompose_lho(d("y1") * d("y1", 2) - d("y1", 1))
        assert (m, initial, rest) == (1, d("y1"), -d("y1", 1))

    def test_order_zero(self):
        with pytest.raises(UnsupportedInputError):
            decompose_lho(d("y1") * d("y1") - 1)


class TestInputAde:
    def test_fields(self):
        ade = InputAde.from_diffpoly(CIRCLE)
        assert ade.indeterminate == "y1"
        assert ade.n == 1
        assert not ade.lho
        assert ade.separant == 2 * d("y1", 1)

    def test_derived_input_is_lho(self):
        derived = InputAde.from_diffpoly(CIRCLE).derived()
        assert derived.lho
        assert derived.n == 2
        assert derived.initial == 2 * d("y1", 1)

    def test_several_indeterminates(self):
        with pytest.raises(UnsupportedInputError):
            InputAde.from_diffpoly(d("y1", 1) - d("y2"))


class TestPolynomialHelpers:
    def test_lcm(self):
        assert poly_lcm([d("y1") * d("y2"), d("y2") * d("y2"), DiffPoly.constant(CONTEXT, 3)]) == d("y1") * d(
            "y2"
        ) * d("y2")

    def test_exact_quotient(self):
        assert exact_quotient(d("y1") * d("y2"), d("y2")) == d("y1")
        with pytest.raises(InternalError):
            exact_quotient(d("y1"), d("y2"))


class TestStateSystem:
    def test_sum_of_circle_and_exponential(self):
        ades = [InputAde.from_diffpoly(CIRCLE), InputAde.from_diffpoly(EXPONENTIAL)]
        system = build_state_system(ades, DiffFraction(d("y1") + d("y2")))
        assert system.M == 2
        assert system.mu == (2, 1)
        assert system.Q == DiffPoly.constant(CONTEXT, 1)
        assert system.b == d("y1") + d("y2")
        assert system.a == (1 - d("y1") * d("y1"), d("y2"))
        assert all(e.is_zero for e in system.e)
        assert system.H == d("y1", 1)

    def test_quotient_target(self):
        ades = [InputAde.from_diffpoly(p) for p in (CIRCLE, EXPONENTIAL, CUBIC)]
        r = DiffFraction(d("y1")) * DiffFraction(d("y3")) / DiffFraction(d("y2"))
        system = build_state_system(ades, r)
        assert system.M == 3
        assert system.mu == (2, 1, 3)
        assert system.Q == d("y2")
        assert system.b == d("y1") * d("y3")
        assert system.a[2] == -3 * d("y2")
        assert system.e[2] == -(d("y2") * d("y3", 1) * d("y3", 1))

        z = DiffPoly.of_variable(system.context, system.output)
        relations = system_polynomials(system)
        assert relations[:3] == [d("y2") * CIRCLE, d("y2") * EXPONENTIAL, d("y2") * CUBIC]
        assert relations[3] == z * d("y2") - d("y1") * d("y3")

    def test_higher_order_input_adds_chain_states(self):
        ade = InputAde.from_diffpoly(d("y1", 2) + d("y1"))
        system = build_state_system([ade], DiffFraction(d("y1")))
        assert system.M == 2
        assert system.blocks[0] == (CONTEXT.descriptor("y1", (0,)), CONTEXT.descriptor("y1", (1,)))
        assert system.a[0] == d("y1", 1)
        assert system.a[1] == -d("y1")

    def test_target_derivative_at_input_order(self):
        ades = [InputAde.from_diffpoly(EXPONENTIAL)]
        with pytest.raises(UnsupportedInputError):
            build_state_system(ades, DiffFraction(d("y2", 1)))

    def test_target_without_input(self):
        ades = [InputAde.from_diffpoly(EXPONENTIAL)]
        with pytest.raises(UnsupportedInputError):
            build_state_system(ades, DiffFraction(d("y1") + d("y2")))

    def test_two_inputs_for_one_indeterminate(self):
        ades = [InputAde.from_diffpoly(EXPONENTIAL), InputAde.from_diffpoly(d("y2", 1) + d("y2"))]
        with pytest.raises(UnsupportedInputError):
            build_state_system(ades, DiffFraction(d("y2")))

    def test_relations_are_scaled_by_common_denominator(self):
        ades = [InputAde.from_diffpoly(d("y1") * d("y1", 1) - 1), InputAde.from_diffpoly(EXPONENTIAL)]
        system = build_state_system(ades, DiffFraction(d("y1") + d("y2")))
        assert system.Q == d("y1")
        relations = system_polynomials(system)
        assert relations[0] == d("y1") * d("y1", 1) - 1
        assert relations[1] == d("y1") * EXPONENTIAL
        assert len(relations) == 3

    def test_chain_relations_left_out(self):
        ade = InputAde.from_diffpoly(d("y1", 2) + d("y1"))
        relations = system_polynomials(build_state_system([ade], DiffFraction(d("y1"))))
        assert relations[0] == d("y1", 2) + d("y1")
        assert len(relations) == 2


class TestStateDerivation:
    @pytest.fixture
    def system(self):
        ades = [InputAde.from_diffpoly(p) for p in (CIRCLE, EXPONENTIAL, CUBIC)]
        r = DiffFraction(d("y1")) * DiffFraction(d("y3")) / DiffFraction(d("y2"))
        return build_state_system(ades, r)

    def test_images(self, system):
        images = state_derivation(system)
        leader = CONTEXT.descriptor("y1", (1,))
        assert images[CONTEXT.descriptor("y1", (0,))] == d("y1", 1)
        assert images[leader] == -d("y1")
        assert images[CONTEXT.descriptor("y2", (0,))] == d("y2")
        assert images[CONTEXT.descriptor("y3", (0,))] == d("y3", 1)
        assert images[CONTEXT.descriptor("y3", (1,))] == DiffPoly.constant(CONTEXT, 0)

    def test_quotient_target(self, system):
        images = state_derivation(system)
        target = DiffFraction(system.b, system.Q)
        numerator = d("y1", 1) * d("y3") + d("y1") * d("y3", 1) - d("y1") * d("y3")
        assert lie_derive(target, images) == DiffFraction(numerator, d("y2"))

    def test_derivatives_only_divide_by_q(self, system):
        images = state_derivation(system)
        z = DiffFraction(system.b, system.Q)
        for _ in range(3):
            z = lie_derive(z, images)
            assert z.den.indeterminate_names() <= {"y2"}

    def test_leibniz(self, system):
        images = state_derivation(system)
        f, g = d("y1") + d("y3", 1), d("y2") * d("y1", 1)
        assert lie_derive(f * g, images) == lie_derive(f, images) * g + DiffFraction(f) * lie_derive(g, images)

    def test_polynomial_rhs_of_higher_order_input(self):
        system = build_state_system([InputAde.from_diffpoly(d("y1", 2) + d("y1"))], DiffFraction(d("y1")))
        images = state_derivation(system)
        assert images[CONTEXT.descriptor("y1", (1,))] == -d("y1")
        assert lie_derive(d("y1") * d("y1") + d("y1", 1) * d("y1", 1), images) == DiffPoly.constant(CONTEXT, 0)

    def test_missing_image(self):
        with pytest.raises(InternalError):
            lie_derive(d("y1"), {})
