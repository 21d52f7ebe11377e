"""Arithmetic of multivariate D-algebraic functions.

Derivatives are taken along the θ-ranking. The output relation R = den(r)·z - num(r)
is derived up to the componentwise order bound, the inputs are derived d times,
and the y-derivatives are eliminated. When the elimination ideal is trivial, d
grows by one until it reaches the θ-rank of the bound.
"""

import logging
import time
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from src.algebra.diffalg import (
    DiffContext,
    DiffFraction,
    DiffPoly,
    MultiIndex,
    diff_order,
    flatten,
    partial_derive,
    sigma_rank,
    sigma_unrank,
)
from src.algebra.groebner import EliminationProblem
from src.algebra.polyring import Poly, Variable, make_table
from src.algebra.utils import GroebnerBudget
from src.data_models.options import CoefficientMode, MultiOptions
from src.data_models.results import AdeResult, NotFound
from src.data_models.stats import GroebnerStats
from src.engines.dynsys import InputAde, poly_lcm
from src.engines.univariate import finish, select_min
from src.exceptions import UnsupportedInputError, UsageError


def _derivatives_by_index(p: DiffPoly, indices: Sequence[MultiIndex]) -> dict[MultiIndex, DiffPoly]:
    """∂^index p for every requested index, sharing intermediate partials."""
    cache: dict[MultiIndex, DiffPoly] = {tuple(0 for _ in range(p.context.l)): p}

    def derive(index: MultiIndex) -> DiffPoly:
        if index not in cache:
            axis = max(slot for slot, n in enumerate(index) if n)
            parent = tuple(n - 1 if slot == axis else n for slot, n in enumerate(index))
            parent_poly = derive(parent)
            cache[index] = parent_poly if parent_poly.is_zero else partial_derive(parent_poly, axis)
        return cache[index]

    return {index: derive(index) for index in indices}


def seed_output_derivatives(R: DiffPoly, bounds: Sequence[int], nu: int) -> list[DiffPoly]:
    """θ^k R for k ≤ ν whose multi-index is componentwise within ``bounds``.

    Zero derivatives are dropped.
    """
    rank = R.context.theta
    if len(bounds) != rank.l or any(b < 0 for b in bounds):
        raise UsageError(f"Invalid order bound {tuple(bounds)} for {rank.l} independent variables")
    indices = [sigma_unrank(rank, k) for k in range(nu + 1)]
    indices = [index for index in indices if all(n <= b for n, b in zip(index, bounds))]
    derived = _derivatives_by_index(R, indices)
    return [derived[index] for index in indices if not derived[index].is_zero]


def seed_input_derivatives(p: DiffPoly, d: int) -> list[DiffPoly]:
    """[p, θ^1 p, ..., θ^d p] without the derivatives that vanish."""
    if d < 0:
        raise UsageError(f"Number of derivations must be nonnegative, got {d}")
    indices = [sigma_unrank(p.context.theta, k) for k in range(d + 1)]
    derived = _derivatives_by_index(p, indices)
    return [derived[index] for index in indices if not derived[index].is_zero]


def _theta_minimal(orders: Sequence[MultiIndex]) -> MultiIndex:
    l = len(orders[0])
    return min(orders, key=lambda o: sigma_rank(l, o))


def _z_multi_order(poly: Poly, l: int) -> tuple[int, ...]:
    descriptors = [v for v in poly.variables() if v.is_derivative]
    return tuple(max(v.index[slot] for v in descriptors) for slot in range(l))


def _saturation_polynomial(ades: Sequence[InputAde], r: DiffFraction) -> Optional[DiffPoly]:
    """lcm of r's denominator, the input initials and the cleared input denominators, if non-constant."""
    factors = [r.den] + [ade.initial for ade in ades]
    factors += [ade.denominator for ade in ades if ade.denominator is not None]
    H = poly_lcm(factors)
    return None if H.poly.is_constant else H


@dataclass(frozen=True)
class MultiSearch:
    """The fixed part of a multivariate search: bound, seeded output derivatives and saturation."""

    ades: tuple[InputAde, ...]
    context: DiffContext
    bounds: MultiIndex
    nu: int
    first_d: int
    outputs: tuple[DiffPoly, ...]
    z_vars: frozenset[Variable]
    saturate_by: Optional[DiffPoly]
    coefficients: CoefficientMode

    def problem(self, d: int) -> EliminationProblem:
        """Elimination problem with every input derived d times along the θ-ranking."""
        l = self.context.l
        generators = list(self.outputs)
        for ade in self.ades:
            generators.extend(seed_input_derivatives(ade.poly.with_context(self.context), d))
        for ade in self.ades:
            ranks = [sigma_rank(l, v.index) for g in generators for v in g.descriptors(ade.indeterminate)]
            logging.debug("d=%d: highest θ-derivative of %s is %d", d, ade.indeterminate, max(ranks, default=0))

        base = self.context.base_variables()
        variables: set[Variable] = set(self.z_vars)
        for g in generators:
            variables |= g.variables()
        if self.saturate_by is not None:
            variables |= self.saturate_by.variables()
        if self.coefficients is CoefficientMode.FRACTION:
            table = make_table(variables - set(base), base)
            keep = set(self.z_vars)
        else:
            table = make_table(variables | set(base))
            keep = set(self.z_vars) | set(base)
        polys = [p for p in (flatten(g, table) for g in generators) if not p.is_zero]
        H = flatten(self.saturate_by, table) if self.saturate_by is not None else None
        eliminated = sorted((v for v in table if v not in keep), key=Variable.rank_key, reverse=True)
        logging.info("Multivariate run: d=%d, %d generators over %d variables", d, len(polys), len(table))
        return EliminationProblem(tuple(polys), frozenset(keep & set(table.variables)), tuple(eliminated), H)


def plan_multi(
    ades: Sequence[InputAde], r: DiffFraction, opts: Optional[MultiOptions] = None, output: str = "z"
) -> MultiSearch:
    """Validate the inputs, fix the order bound and seed the output derivatives.

    Raises:
        UsageError: If the bound or variables list disagrees with the context
        UnsupportedInputError: If an indeterminate has several input ADEs or r uses one without an ADE
    """
    opts = opts or MultiOptions()
    if not ades:
        raise UsageError("At least one input ADE is required")
    context = ades[0].poly.context
    l = context.l
    if opts.variables is not None and tuple(opts.variables) != context.independents:
        raise UsageError(f"Variables {opts.variables} do not match the declared {list(context.independents)}")
    names = [ade.indeterminate for ade in ades]
    if len(set(names)) != len(names):
        raise UnsupportedInputError(f"Each indeterminate needs exactly one input ADE: {names}")
    unknown = {v.name for v in r.descriptors()} - set(names)
    if unknown:
        raise UnsupportedInputError(f"Target uses {sorted(unknown)}, which have no input ADE")

    orders = [diff_order(ade.poly, ade.indeterminate) for ade in ades]
    if opts.maxord is not None:
        if len(opts.maxord) != l:
            raise UsageError(f"maxord has {len(opts.maxord)} components but {l} independent variables are declared")
        bounds = tuple(opts.maxord)
    else:
        bounds = tuple(sum(o[slot] for o in orders) for slot in range(l))
    nu = sigma_rank(l, bounds)
    m = _theta_minimal(orders)
    d = sigma_rank(l, tuple(max(b - n, 0) for b, n in zip(bounds, m)))

    zcontext = context.with_indeterminate(output)
    z = DiffPoly.descriptor(zcontext, output, (0,) * l)
    R = (z * r.den - r.num).compact()
    z_vars = {zcontext.descriptor(output, index) for index in (sigma_unrank(l, k) for k in range(nu + 1))}
    z_vars = {v for v in z_vars if all(n <= b for n, b in zip(v.index, bounds))}
    H = _saturation_polynomial(ades, r)
    logging.info("Multivariate run: bound %s (θ-rank %d), starting with d=%d", bounds, nu, d)
    return MultiSearch(
        ades=tuple(ades),
        context=zcontext,
        bounds=bounds,
        nu=nu,
        first_d=d,
        outputs=tuple(seed_output_derivatives(R, bounds, nu)),
        z_vars=frozenset(z_vars),
        saturate_by=H.with_context(zcontext) if H is not None else None,
        coefficients=opts.coefficients,
    )


def arithmetic_multi(
    ades: Sequence[InputAde],
    r: DiffFraction,
    opts: Optional[MultiOptions] = None,
    output: str = "z",
    budget: Optional[GroebnerBudget] = None,
) -> Union[AdeResult, NotFound]:
    """Search an ADE satisfied by r whose order is componentwise within a bound.

    Args:
        ades: input ADEs over a common context of independent variables
        r: the target expression
        opts: order bound, elimination strategy and coefficient mode
        output: name of the output indeterminate
        budget: Gröbner resource limits

    Returns:
        The selected, normalized ADE, or NotFound when every d up to the θ-rank of the bound gives a
        trivial elimination ideal

    Raises:
        UsageError: If the bound or variables list disagrees with the context
        UnsupportedInputError: If an indeterminate has several input ADEs or r uses one without an ADE
        BudgetExceededError: If the Gröbner budget is exhausted
    """
    start = time.monotonic()
    opts = opts or MultiOptions()
    search = plan_multi(ades, r, opts, output)
    independents = search.context.independents
    l = search.context.l

    d = search.first_d
    while d <= search.nu:
        stats = GroebnerStats()
        G = search.problem(d).solve(opts.ordering, budget, stats)
        candidates = [g for g in G if any(v.is_derivative for v in g.variables())]
        if candidates:
            poly = finish(select_min(candidates))
            z_degree = poly.degree([v for v in poly.variables() if v.is_derivative])
            return AdeResult(
                polynomial=poly,
                output=output,
                independents=independents,
                order=_z_multi_order(poly, l),
                degree=z_degree,
                elapsed_ms=(time.monotonic() - start) * 1000.0,
                options=opts.echo(),
                derivations=d,
                stats=stats,
            )
        logging.info("Elimination ideal is trivial for d=%d", d)
        d += 1

    return NotFound(
        bound=search.bounds,
        output=output,
        independents=independents,
        last_d=max(d - 1, 0),
        elapsed_ms=(time.monotonic() - start) * 1000.0,
        options=opts.echo(),
    )
