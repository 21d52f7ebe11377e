"""State-space systems built from input ADEs and a rational target expression.

Each input ADE p_i of order n_i in y_i contributes the states y_i, y_i', ...,
y_i^(n_i - 1). States are identified with the derivative variables of y_i, so
the chain relations w_j' = w_{j+1} hold by construction and only the top
relation of each block needs to be stated.
"""

import functools
import logging
from dataclasses import dataclass, field
from typing import Collection, Mapping, Optional, Sequence, Union

from src.algebra.diffalg import DiffContext, DiffFraction, DiffPoly, MultiIndex, diff_order, total_derive
from src.algebra.groebner import Ideal
from src.algebra.polyring import MonomialOrder, Poly, Variable, VarKind, make_table, poly_exact_divide, poly_normalize
from src.exceptions import DegenerateExpressionError, InternalError, UnsupportedInputError, UsageError


@dataclass(frozen=True)
class InputAde:
    """An input ADE p = c_m·(y^(n))^m + p_rest in a single indeterminate."""

    poly: DiffPoly
    indeterminate: str
    leader: Variable
    order: MultiIndex
    top_degree: int
    initial: DiffPoly
    rest: DiffPoly
    denominator: Optional[DiffPoly] = None  # cleared while parsing, saturated away by the engines

    @classmethod
    def from_diffpoly(cls, p: DiffPoly, denominator: Optional[DiffPoly] = None) -> "InputAde":
        """Analyze an input polynomial.

        Raises:
            UnsupportedInputError: If p involves no or several indeterminates, or has order 0
        """
        names = p.indeterminate_names()
        if len(names) != 1:
            raise UnsupportedInputError(
                f"Each input ADE must involve exactly one indeterminate, got {sorted(names) or 'none'}: {p}"
            )
        (name,) = names
        m, initial, rest = decompose_lho(p)
        return cls(
            poly=p,
            indeterminate=name,
            leader=p.leader(name),
            order=diff_order(p, name),
            top_degree=m,
            initial=initial,
            rest=rest,
            denominator=denominator,
        )

    @property
    def lho(self) -> bool:
        """Whether the ADE is linear in its highest derivative."""
        return self.top_degree == 1

    @property
    def n(self) -> int:
        """Ordinary order (one independent variable)."""
        if len(self.order) != 1:
            raise UsageError("Ordinary order is only defined for one independent variable")
        return self.order[0]

    @property
    def separant(self) -> DiffPoly:
        return self.poly.diff(self.leader)

    def derived(self) -> "InputAde":
        """The ADE replaced by its total derivative (always l.h.o.)."""
        return InputAde.from_diffpoly(total_derive(self.poly), self.denominator)


def decompose_lho(p: DiffPoly) -> tuple[int, DiffPoly, DiffPoly]:
    """Split p as c_m·(y^(n))^m + p_rest with y^(n) the leader.

    Returns:
        (m, c_m, p_rest) with deg_{y^(n)}(p_rest) < m and c_m free of y^(n)

    Raises:
        UnsupportedInputError: If p has order 0 (a purely algebraic constraint)
    """
    try:
        leader = p.leader()
    except UsageError:
        raise UnsupportedInputError(f"Input involves no indeterminate: {p}")
    if not any(leader.index):
        raise UnsupportedInputError(f"Order-0 input ADEs are not supported: {p}")
    m = p.degree_in(leader)
    initial = p.coeff_of_power(leader, m)
    rest = p - initial * DiffPoly.of_variable(p.context, leader) ** m
    return m, initial.compact(), rest.compact()


def _normalized(p: DiffPoly) -> DiffPoly:
    if p.is_zero:
        raise InternalError("Cannot normalize the zero polynomial")
    return DiffPoly(p.context, poly_normalize(p.compact().poly))


def poly_lcm(polys: Sequence[DiffPoly]) -> DiffPoly:
    """Normalized least common multiple; constants are dropped."""
    context = polys[0].context

    def lcm(f: DiffPoly, g: DiffPoly) -> DiffPoly:
        a, b = f._lift(g)
        return _normalized(DiffPoly(context, Poly(a.table, a.expr.lcm(b.expr))))

    return functools.reduce(lcm, [_normalized(p) for p in polys], DiffPoly.constant(context, 1))


def exact_quotient(f: DiffPoly, g: DiffPoly) -> DiffPoly:
    a, b = f._lift(g)
    q = poly_exact_divide(a, b)
    if q is None:
        raise InternalError(f"{g} does not divide {f}")
    return DiffPoly(f.context, q).compact()


@dataclass(frozen=True)
class DynSystem:
    """A (radical-)rational dynamical system Q·(w_i')^μ_i = a_i + e_i with output Q·z = b.

    States are derivative variables y_i^(j); ``blocks[i]`` lists the states of input i, lowest first.
    """

    context: DiffContext
    ades: tuple[InputAde, ...]
    states: tuple[Variable, ...]
    blocks: tuple[tuple[Variable, ...], ...]
    mu: tuple[int, ...]
    a: tuple[DiffPoly, ...]
    e: tuple[DiffPoly, ...]
    Q: DiffPoly
    b: DiffPoly
    H: DiffPoly
    output: Variable
    separants: tuple[DiffPoly, ...] = field(default=())

    @property
    def M(self) -> int:
        return len(self.states)


def _check_target(ades: Sequence[InputAde], r: DiffFraction) -> None:
    orders = {ade.indeterminate: ade.order for ade in ades}
    for v in r.descriptors():
        if v.name not in orders:
            raise UnsupportedInputError(f"Target uses {v.name}, which has no input ADE")
        if any(k >= n for k, n in zip(v.index, orders[v.name])):
            raise UnsupportedInputError(
                f"Target uses {v}, at or above the order {orders[v.name]} of its input ADE"
            )


def _check_degenerate(ades: Sequence[InputAde], r: DiffFraction) -> None:
    """Reject r when its denominator vanishes modulo the input ADEs."""
    if r.is_polynomial:
        return
    den = r.den.compact()
    variables = set(den.variables())
    for ade in ades:
        variables |= ade.poly.variables()
    table = make_table(variables)
    ideal = Ideal([ade.poly.poly.to_table(table) for ade in ades], MonomialOrder.degrevlex(table))
    if den.poly.to_table(table) in ideal:
        raise DegenerateExpressionError(f"Denominator {den} of the target vanishes on the input ADEs")


def build_state_system(ades: Sequence[InputAde], r: DiffFraction, output: str = "z") -> DynSystem:
    """Build the state-space system of the inputs and the output relation Q·z = b.

    Args:
        ades: input ADEs in distinct indeterminates, all of order at least 1
        r: the target expression in the states
        output: name of the output indeterminate

    Returns:
        The dynamical system with Q (lcm of all initials and of r's denominator) and H

    Raises:
        UnsupportedInputError: For order-0 inputs or out-of-bound derivatives in r
        DegenerateExpressionError: If r's denominator vanishes on the inputs
    """
    if not ades:
        raise UsageError("At least one input ADE is required")
    context = ades[0].poly.context
    if context.l != 1:
        raise UsageError(f"State-space systems need one independent variable, got {context.l}")
    names = [ade.indeterminate for ade in ades]
    if len(set(names)) != len(names):
        raise UnsupportedInputError(f"Each indeterminate needs exactly one input ADE: {names}")
    for ade in ades:
        if ade.n < 1:
            raise UnsupportedInputError(f"Order-0 input ADEs are not supported: {ade.poly}")
    _check_target(ades, r)
    _check_degenerate(ades, r)

    context = context.with_indeterminate(output)
    cleared = [ade.denominator for ade in ades if ade.denominator is not None]
    Q = poly_lcm([ade.initial for ade in ades] + cleared + [r.den])
    b = r.num * exact_quotient(Q, r.den)

    states: list[Variable] = []
    blocks: list[tuple[Variable, ...]] = []
    mu: list[int] = []
    a: list[DiffPoly] = []
    e: list[DiffPoly] = []
    separants: list[DiffPoly] = []
    for ade in ades:
        block = tuple(context.descriptor(ade.indeterminate, (j,)) for j in range(ade.n))
        blocks.append(block)
        for state in block[:-1]:
            nxt = Variable.derivative(state.name, (state.index[0] + 1,), state.ordinal)
            states.append(state)
            mu.append(1)
            a.append(DiffPoly.of_variable(context, nxt) * Q)
            e.append(DiffPoly.constant(context, 0))
        scale = exact_quotient(Q, ade.initial)
        free = ade.rest.coeff_of_power(ade.leader, 0)
        states.append(block[-1])
        mu.append(ade.top_degree)
        a.append((-free * scale).compact())
        e.append((-(ade.rest - free) * scale).compact())
        separants.append((ade.separant * scale).compact())

    H = poly_lcm([Q] + separants)
    system = DynSystem(
        context=context,
        ades=tuple(ades),
        states=tuple(states),
        blocks=tuple(blocks),
        mu=tuple(mu),
        a=tuple(a),
        e=tuple(e),
        Q=Q,
        b=b.compact(),
        H=H,
        output=context.descriptor(output, (0,)),
        separants=tuple(separants),
    )
    logging.info(
        "State system: M=%d, mu=%s, Q=%s, H=%s", system.M, list(system.mu), system.Q, system.H
    )
    return system


def system_polynomials(system: DynSystem) -> list[DiffPoly]:
    """The relations Q·(w_i')^μ_i - a_i - e_i and Q·z - b, ready for derivation.

    Chain relations Q·w_{j+1} - a_j vanish identically under the state identification and are left out,
    so the list holds one top relation per input, in input order, followed by the output relation.
    """
    context = system.context
    tops = {block[-1]: ade for block, ade in zip(system.blocks, system.ades)}
    relations = []
    for state, mu, a, e in zip(system.states, system.mu, system.a, system.e):
        if state not in tops:
            continue
        leader = DiffPoly.of_variable(context, tops[state].leader)
        relations.append((system.Q * leader**mu - a - e).compact())
    z = DiffPoly.of_variable(context, system.output)
    return relations + [(system.Q * z - system.b).compact()]


def lie_derive(
    f: Union[DiffFraction, DiffPoly],
    images: Mapping[Variable, DiffFraction],
    frozen: Collection[Variable] = (),
) -> DiffFraction:
    """d/dx of f when every derivative variable v of f differentiates to ``images[v]``.

    Variables in ``frozen`` are treated as constants.

    Raises:
        InternalError: If a derivative variable of f has no image
    """
    f = DiffFraction.lift(f)

    def derive(p: DiffPoly) -> DiffFraction:
        result = DiffFraction(DiffPoly.constant(p.context, 0))
        for v in p.variables():
            if v.kind is VarKind.PARAMETER or v in frozen:
                continue
            if v.kind is VarKind.INDEPENDENT:
                result = result + p.diff(v)
            elif v in images:
                result = result + images[v] * p.diff(v)
            else:
                raise InternalError(f"No derivative is known for {v}")
        return result

    den = DiffFraction(f.den)
    return (derive(f.num) * den - derive(f.den) * DiffFraction(f.num)) / (den * den)


def state_derivation(system: DynSystem) -> dict[Variable, DiffFraction]:
    """The vector field of the system: d/dx of every state and of every radical top derivative.

    A state with μ_i = 1 differentiates to (a_i + e_i)/Q. The top state of an input with μ_i > 1
    differentiates to the input's leader w_i', whose own derivative -T_i/S_i is read off the total
    derivative S_i·w_i'' + T_i of the input ADE. Valid wherever Q and the separants S_i do not vanish.
    """
    context = system.context
    tops = {block[-1]: ade for block, ade in zip(system.blocks, system.ades)}
    images: dict[Variable, DiffFraction] = {}
    radical: list[InputAde] = []
    for state, mu, a, e in zip(system.states, system.mu, system.a, system.e):
        if mu == 1:
            images[state] = DiffFraction(a + e, system.Q)
        else:
            ade = tops[state]
            images[state] = DiffFraction(DiffPoly.of_variable(context, ade.leader))
            radical.append(ade)
    for ade in radical:
        p = ade.poly.with_context(context)
        rest = lie_derive(p, images, frozen={ade.leader})
        images[ade.leader] = -(rest / DiffFraction(p.diff(ade.leader)))
    return images
