"""Arithmetic of univariate D-algebraic functions.

Given input ADEs for y_1, ..., y_N and a rational expression r of the y_i, the
engine builds the state-space system and differentiates z = r(y_1, ..., y_N)
along its vector field. Saturating and eliminating the states leaves relations
that only involve z, its derivatives, x and the parameters.
"""

import logging
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from src.algebra.diffalg import DiffFraction, DiffPoly, flatten, sigma_rank, total_derive
from src.algebra.groebner import EliminationProblem
from src.algebra.polyring import Poly, Variable, make_table, poly_normalize
from src.algebra.utils import GroebnerBudget
from src.data_models.options import CoefficientMode, LhoMode, Ordering, UniOptions
from src.data_models.results import AdeResult
from src.data_models.stats import GroebnerStats
from src.engines.dynsys import (
    DynSystem,
    InputAde,
    build_state_system,
    lie_derive,
    state_derivation,
    system_polynomials,
)
from src.exceptions import NoAdeFoundError, UsageError

SEPARANTS_ZEROS_WARNING = (
    "separants_zeros: the result may carry extra factors vanishing with the separants, "
    "and the elimination ideal is not guaranteed to be nontrivial"
)


def derivatives(p: DiffPoly, k: int) -> list[DiffPoly]:
    """[p, p', ..., p^(k)]."""
    result = [p]
    for _ in range(k):
        result.append(total_derive(result[-1]))
    return result


def _z_order(poly: Poly) -> int:
    """θ-order of the highest derivative variable in poly (-1 when there is none)."""
    ranks = [sigma_rank(len(v.index), v.index) for v in poly.variables() if v.is_derivative]
    return max(ranks, default=-1)


def _z_degree(poly: Poly) -> int:
    return poly.degree([v for v in poly.variables() if v.is_derivative])


def select_min(G: Sequence[Poly]) -> Poly:
    """Element of lowest order, then lowest total degree in the derivative variables.

    Ties are broken by the number of terms, then by the printed form.

    Raises:
        UsageError: If G is empty
    """
    if not G:
        raise UsageError("select_min needs at least one candidate")
    return min(G, key=lambda g: (_z_order(g), _z_degree(g), len(g.expr), str(g)))


def resolve_path(ades: Sequence[InputAde], opts: UniOptions) -> tuple[list[InputAde], bool, Ordering]:
    """Decide between the l.h.o. path and the separant path.

    Returns:
        (inputs to use, whether the l.h.o. path runs, elimination strategy)
    """
    all_lho = all(ade.lho for ade in ades)
    differentiate = opts.diff_first or opts.lho_mode is LhoMode.FORCE_LHO
    if differentiate:
        ades = [ade if ade.lho else ade.derived() for ade in ades]
        lho_path = True
    elif opts.lho_mode is LhoMode.FORCE_NONLHO:
        lho_path = False
    else:
        lho_path = all_lho
    if opts.ordering is not None:
        strategy = opts.ordering
    elif lho_path or opts.lhoplex:
        strategy = Ordering.LEX
    else:
        strategy = Ordering.LEXDEG
    return list(ades), lho_path, strategy


def finish(poly: Poly) -> Poly:
    """Clear coefficient denominators, drop unused variables and normalize."""
    expanded = poly.expand()
    compact = expanded.to_table(make_table(expanded.variables()))
    return poly_normalize(compact)


def derived_relations(system: DynSystem) -> list[DiffPoly]:
    """The system relations with their first M-1 derivatives and the output relation with its first M."""
    M = system.M
    relations = system_polynomials(system)
    generators: list[DiffPoly] = []
    for p in relations[:-1]:
        generators.extend(derivatives(p, M - 1))
    generators.extend(derivatives(relations[-1], M))
    return generators


def state_relations(system: DynSystem, output: str) -> list[DiffPoly]:
    """den_k·z^(k) - num_k for z^(k) = (d/dx)^k (b/Q), k ≤ M, and the inputs that are not l.h.o.

    Every y_i^(j) above the states is expressed through the state derivation, so after saturation by
    H this generates the same elimination ideal as ``derived_relations`` with far fewer variables.
    """
    images = state_derivation(system)
    # the top relation of a non-l.h.o. input is Q/c_i times the input ADE
    relations = [ade.poly.with_context(system.context) for ade in system.ades if not ade.lho]
    z = DiffFraction(system.b, system.Q)
    for k in range(system.M + 1):
        Z = DiffPoly.descriptor(system.context, output, (k,))
        relations.append((z.den * Z - z.num).compact())
        if k < system.M:
            z = lie_derive(z, images)
    return relations


@dataclass(frozen=True)
class UniPlan:
    """Everything a univariate run decides before the Gröbner computation."""

    system: DynSystem
    lho_path: bool
    strategy: Ordering
    problem: EliminationProblem
    warnings: tuple[str, ...] = ()


def plan_uni(
    ades: Sequence[InputAde], r: DiffFraction, opts: Optional[UniOptions] = None, output: str = "z"
) -> UniPlan:
    """Build the state system and the elimination problem of a univariate run.

    Raises:
        UnsupportedInputError: For order-0 inputs or out-of-bound derivatives in r
        DegenerateExpressionError: If r's denominator vanishes on the inputs
    """
    opts = opts or UniOptions()
    ades, lho_path, strategy = resolve_path(ades, opts)
    system = build_state_system(ades, r, output)
    M = system.M

    warnings = []
    if opts.separants_zeros:
        # separants stay invertible nowhere, so higher derivatives are eliminated, not solved for
        H = system.Q
        generators = derived_relations(system)
        warnings.append(SEPARANTS_ZEROS_WARNING)
        logging.warning("Saturating by Q only; %s", SEPARANTS_ZEROS_WARNING)
    else:
        H = system.Q if lho_path else system.H
        generators = state_relations(system, output)

    context = system.context
    z_vars = [context.descriptor(output, (k,)) for k in range(M + 1)]
    base = context.base_variables()
    variables: set[Variable] = set(z_vars)
    for g in generators:
        variables |= g.variables()
    variables |= H.variables()
    if opts.coefficients is CoefficientMode.FRACTION:
        table = make_table(variables - set(base), base)
        keep = set(z_vars)
    else:
        table = make_table(variables | set(base))
        keep = set(z_vars) | set(base)

    polys = [flatten(g, table) for g in generators]
    polys = [p for p in polys if not p.is_zero]
    eliminated = sorted((v for v in table if v not in keep), key=Variable.rank_key, reverse=True)
    problem = EliminationProblem(tuple(polys), frozenset(keep), tuple(eliminated), flatten(H, table))
    logging.info(
        "Univariate run: %d inputs, M=%d, %d generators over %d variables, %s path, %s",
        len(ades),
        M,
        len(polys),
        len(table),
        "l.h.o." if lho_path else "separant",
        strategy.name.lower(),
    )
    return UniPlan(system, lho_path, strategy, problem, tuple(warnings))


def arithmetic_uni(
    ades: Sequence[InputAde],
    r: DiffFraction,
    opts: Optional[UniOptions] = None,
    output: str = "z",
    budget: Optional[GroebnerBudget] = None,
) -> AdeResult:
    """Compute an ADE of order at most M = Σ n_i satisfied by r(y_1, ..., y_N).

    Args:
        ades: input ADEs in distinct indeterminates of one independent variable
        r: the target expression
        opts: pipeline options
        output: name of the output indeterminate
        budget: Gröbner resource limits

    Returns:
        The selected, normalized ADE

    Raises:
        NoAdeFoundError: If the elimination ideal is trivial
        UnsupportedInputError: For order-0 inputs or out-of-bound derivatives in r
        DegenerateExpressionError: If r's denominator vanishes on the inputs
        BudgetExceededError: If the Gröbner budget is exhausted
    """
    start = time.monotonic()
    opts = opts or UniOptions()
    plan = plan_uni(ades, r, opts, output)

    stats = GroebnerStats()
    G = plan.problem.solve(plan.strategy, budget, stats)
    candidates = [g for g in G if _z_order(g) >= 0]
    if not candidates:
        raise NoAdeFoundError(f"The elimination ideal of order {plan.system.M} is trivial")
    poly = finish(select_min(candidates))

    echo = opts.echo()
    echo.update({"path": "lho" if plan.lho_path else "separant", "ordering": plan.strategy.name.lower()})
    return AdeResult(
        polynomial=poly,
        output=output,
        independents=plan.system.context.independents,
        order=_z_order(poly),
        degree=_z_degree(poly),
        elapsed_ms=(time.monotonic() - start) * 1000.0,
        options=echo,
        warnings=list(plan.warnings),
        stats=stats,
    )


def unary_uni(
    ade: InputAde,
    r: DiffFraction,
    opts: Optional[UniOptions] = None,
    output: str = "z",
    budget: Optional[GroebnerBudget] = None,
) -> AdeResult:
    """Single-input specialization of arithmetic_uni (e.g. a change of variable z = r(y))."""
    return arithmetic_uni([ade], r, opts, output, budget)
