"""Canonical rendering of engine results.

Terms are printed in descending lex order of the result's variable table
(z-derivatives highest, then independent variables, then parameters). Inside
a term, factors are printed lowest-ranked first, e.g. ``2*z*D[x](z)``.
"""

import json
from typing import Optional, Sequence, Union

from sympy import Symbol, latex

from src.algebra.polyring import Poly, Variable
from src.data_models.options import PrintStyle
from src.data_models.results import AdeReport, AdeResult, NotFound, TermReport


def descriptor_ascii(variable: Variable, independents: Sequence[str]) -> str:
    """``z``, ``D[x,x](z)`` or ``D[x1,x2](z)``; other variables print as their name."""
    if not variable.is_derivative or not any(variable.index):
        return variable.name
    slots = [x for x, n in zip(independents, variable.index) for _ in range(n)]
    return f"D[{','.join(slots)}]({variable.name})"


def descriptor_latex(variable: Variable, independents: Sequence[str]) -> str:
    name = latex(Symbol(variable.name))
    if not variable.is_derivative or not any(variable.index):
        return name
    parts = []
    for x, n in zip(independents, variable.index):
        if n:
            symbol = latex(Symbol(x))
            parts.append(f"\\partial_{{{symbol}}}" + (f"^{{{n}}}" if n > 1 else ""))
    return f"{''.join(parts)} {name}"


def _factors(poly: Poly, monom: Sequence[int], independents: Sequence[str], style: PrintStyle) -> list[str]:
    factors = []
    for position in reversed(range(len(monom))):
        exponent = monom[position]
        if not exponent:
            continue
        variable = poly.table.variables[position]
        if style is PrintStyle.LATEX:
            base = descriptor_latex(variable, independents)
            if exponent > 1:
                if variable.is_derivative and any(variable.index):
                    base = f"\\left({base}\\right)"
                base = f"{base}^{{{exponent}}}"
        else:
            base = descriptor_ascii(variable, independents)
            if exponent > 1:
                base = f"{base}^{exponent}"
        factors.append(base)
    return factors


def format_poly(poly: Poly, independents: Sequence[str], style: PrintStyle = PrintStyle.ASCII) -> str:
    """A polynomial in canonical term order, without ``= 0``."""
    if poly.is_zero:
        return "0"
    joiner = " " if style is PrintStyle.LATEX else "*"
    pieces: list[str] = []
    for coeff, monom in poly.terms():
        negative = coeff < 0
        magnitude = -coeff if negative else coeff
        factors = _factors(poly, monom, independents, style)
        if magnitude != 1 or not factors:
            factors.insert(0, str(magnitude))
        term = joiner.join(factors)
        if not pieces:
            pieces.append(f"-{term}" if negative else term)
        else:
            pieces.append(f"- {term}" if negative else f"+ {term}")
    return " ".join(pieces)


def print_ade(res: AdeResult, style: PrintStyle = PrintStyle.ASCII) -> str:
    """Deterministic one-line rendering ``<poly> = 0``.

    >>> from src.algebra.polyring import make_table
    >>> z = Variable.derivative("z", (0,))
    >>> table = make_table([z])
    >>> res = AdeResult(polynomial=Poly.variable(table, z) - Poly.constant(table, 1), independents=("x",),
    ...                 order=0, degree=1)
    >>> print_ade(res)
    'z - 1 = 0'
    """
    return f"{format_poly(res.polynomial, res.independents, style)} = 0"


def term_reports(res: AdeResult) -> list[TermReport]:
    reports = []
    for coeff, monom in res.polynomial.terms():
        variables = res.polynomial.table.variables
        pairs = [
            (descriptor_ascii(variables[position], res.independents), exponent)
            for position, exponent in reversed(list(enumerate(monom)))
            if exponent
        ]
        reports.append(TermReport(coeff=str(coeff), monomial=pairs))
    return reports


def build_report(outcome: Union[AdeResult, NotFound, None], error: Optional[str] = None) -> AdeReport:
    """The machine-readable report of an outcome, or of a failure when ``error`` is given."""
    if error is not None or outcome is None:
        return AdeReport(status="error", message=error or "No result")
    if isinstance(outcome, NotFound):
        return AdeReport(
            status="not_found",
            output=outcome.output,
            independents=list(outcome.independents),
            options=outcome.options,
            elapsed_ms=outcome.elapsed_ms,
            bound=list(outcome.bound),
            message=outcome.message,
        )
    order = list(outcome.order) if isinstance(outcome.order, tuple) else outcome.order
    return AdeReport(
        status="ok",
        order=order,
        degree=outcome.degree,
        poly=print_ade(outcome),
        terms=term_reports(outcome),
        output=outcome.output,
        independents=list(outcome.independents),
        options=outcome.options,
        elapsed_ms=outcome.elapsed_ms,
        warnings=outcome.warnings,
    )


def emit_json(outcome: Union[AdeResult, NotFound, None], error: Optional[str] = None) -> str:
    """JSON text of ``build_report``; keys are sorted so output is deterministic apart from timing."""
    report = build_report(outcome, error)
    return json.dumps(report.model_dump(mode="json"), indent=2, sort_keys=True, ensure_ascii=False)
