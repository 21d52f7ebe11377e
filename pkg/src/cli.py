"""dalg command-line interface.

    dalg uni -i circle_plus_exp.dalg --lho false
    dalg multi -i raised_bound_sum.dalg --maxord 4,1
    dalg unary -i kdv.dalg --json
    dalg verify -i sum.dalg --result out/sum_ade.json --trunc 20 --series "y1 = cos(x); y2 = exp(x)"
    dalg rank --l 2 --tuple 1,2

Exit codes: 0 ok, 2 no ADE within the bound, 1 error, 64 usage error.
"""

import argparse
import asyncio
import json
import logging
import sys
from typing import NoReturn, Optional, Sequence

from pydantic import ValidationError

from src.algebra.diffalg import sigma_rank, sigma_unrank
from src.algebra.utils import configure_budget, get_log_level
from src.dalg_solver import EngineOptions, process_files_async, verify_file
from src.data_models.options import (
    CoefficientMode,
    EngineMode,
    LhoMode,
    MultiOptions,
    Ordering,
    PrintStyle,
    UniOptions,
    parse_enum,
)
from src.data_models.results import (
    EXIT_ERROR,
    EXIT_NOT_FOUND,
    EXIT_OK,
    EXIT_USAGE,
    AdeResult,
    FileRun,
    NotFound,
    combined_exit_code,
)
from src.exceptions import DalgError, UsageError
from src.frontend.printer import build_report, print_ade
from src.services import ResultHandlerError

LHO_FLAGS = {"auto": LhoMode.AUTO, "true": LhoMode.FORCE_LHO, "false": LhoMode.FORCE_NONLHO}


class _ArgumentParser(argparse.ArgumentParser):
    """ArgumentParser exiting with the usage-error code."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_tuple(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for Gröbner details")


def _add_engine(parser: argparse.ArgumentParser) -> None:
    _add_common(parser)
    parser.add_argument("--input", "-i", action="append", required=True, help="System file; repeat for a batch")
    parser.add_argument("--ordering", choices=["lex", "lexdeg"], help="Elimination strategy")
    parser.add_argument("--coefficients", choices=["polynomial", "fraction"], help="Coefficient handling")
    parser.add_argument("--json", action="store_true", help="Print the machine-readable report")
    parser.add_argument("--latex", action="store_true", help="Print (and save) the equation in LaTeX")
    parser.add_argument("--output-dir", "-o", help="Directory to save results to")
    parser.add_argument("--max-pairs", type=int, help="S-pair budget per Gröbner run")
    parser.add_argument("--time-limit-s", type=float, help="Wall-clock budget per Gröbner run, 0 for none")
    parser.add_argument("--max-workers", "-w", type=int, default=2, help="Maximum number of concurrent workers")


def _add_univariate(parser: argparse.ArgumentParser) -> None:
    _add_engine(parser)
    parser.add_argument("--lho", choices=sorted(LHO_FLAGS), default="auto", help="l.h.o. path selection")
    parser.add_argument("--lhoplex", action="store_true", help="Pure lex on the separant path")
    parser.add_argument("--separants-zeros", action="store_true", help="Saturate by the denominators only")
    parser.add_argument("--diff-first", action="store_true", help="Differentiate non-l.h.o. inputs first")


def build_parser() -> argparse.ArgumentParser:
    """Parse command line arguments."""
    parser = _ArgumentParser(prog="dalg", description="Arithmetic of D-algebraic functions")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    _add_univariate(subparsers.add_parser("uni", help="ADE of a rational expression of univariate functions"))
    _add_univariate(subparsers.add_parser("unary", help="ADE of a rational expression of one univariate function"))

    multi = subparsers.add_parser("multi", help="PDE of a rational expression of multivariate functions")
    _add_engine(multi)
    multi.add_argument("--maxord", type=_int_tuple, help="Componentwise order bound, e.g. 4,1")

    verify = subparsers.add_parser("verify", help="Certify a saved result with truncated series solutions")
    _add_common(verify)
    verify.add_argument("--input", "-i", required=True, help="System file the result was computed from")
    verify.add_argument("--result", required=True, help="JSON report written with --output-dir")
    verify.add_argument("--series", required=True, help='Input solutions, e.g. "y1 = cos(x); y2 = exp(x)"')
    verify.add_argument("--trunc", type=int, required=True, help="Truncation degree")
    verify.add_argument("--param", action="append", default=[], help="Parameter value, e.g. a=1")
    verify.add_argument("--json", action="store_true", help="Print a JSON verdict")

    rank = subparsers.add_parser("rank", help="θ-ranking of multi-indices")
    _add_common(rank)
    rank.add_argument("--l", dest="l", type=int, required=True, help="Number of independent variables")
    group = rank.add_mutually_exclusive_group(required=True)
    group.add_argument("--tuple", type=_int_tuple, help="Multi-index to rank, e.g. 1,2")
    group.add_argument("--index", type=int, help="Rank to unrank")
    return parser


def engine_options(args: argparse.Namespace) -> EngineOptions:
    """Options model of the subcommand.

    Raises:
        ValueError: On contradictory flags (pydantic validation errors are ValueErrors)
    """
    ordering = parse_enum(Ordering, args.ordering) if args.ordering else None
    coefficients = parse_enum(CoefficientMode, args.coefficients) if args.coefficients else None
    if args.command == "multi":
        values = {"maxord": args.maxord}
        if ordering is not None:
            values["ordering"] = ordering
        if coefficients is not None:
            values["coefficients"] = coefficients
        return MultiOptions(**values)
    values = {
        "lho_mode": LHO_FLAGS[args.lho],
        "ordering": ordering,
        "lhoplex": args.lhoplex,
        "separants_zeros": args.separants_zeros,
        "diff_first": args.diff_first,
    }
    if coefficients is not None:
        values["coefficients"] = coefficients
    return UniOptions(**values)


def _render(run: FileRun, style: PrintStyle) -> str:
    if isinstance(run.outcome, AdeResult):
        return print_ade(run.outcome, style)
    if isinstance(run.outcome, NotFound):
        return f"not_found: {run.outcome.message}"
    return f"error: {run.error}"


def _run_engine_command(args: argparse.Namespace) -> int:
    try:
        options = engine_options(args)
        budget = configure_budget(max_pairs=args.max_pairs, time_limit_s=args.time_limit_s)
    except (ValueError, ValidationError) as e:
        print(f"dalg: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.max_workers < 1:
        print("dalg: error: --max-workers must be at least 1", file=sys.stderr)
        return EXIT_USAGE

    mode = parse_enum(EngineMode, args.command)
    style = PrintStyle.LATEX if args.latex else PrintStyle.ASCII
    runs = asyncio.run(
        process_files_async(args.input, mode, options, args.output_dir, style, budget, args.max_workers)
    )

    if args.json:
        reports = [build_report(run.outcome, run.error).model_dump(mode="json") for run in runs]
        print(json.dumps(reports[0] if len(reports) == 1 else reports, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        for run in runs:
            line = _render(run, style)
            prefix = f"{run.file_name}: " if len(runs) > 1 else ""
            print(f"{prefix}{line}")
    for run in runs:
        for warning in run.outcome.warnings if isinstance(run.outcome, AdeResult) else []:
            logging.warning("%s: %s", run.file_name, warning)
    return combined_exit_code(runs)


def _run_verify(args: argparse.Namespace) -> int:
    try:
        with open(args.input, "r", encoding="utf-8") as f:
            system_text = f.read()
    except OSError as e:
        print(f"dalg: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        certified = verify_file(system_text, args.result, args.series, args.trunc, args.param)
    except (DalgError, ResultHandlerError) as e:
        logging.error("Failed to verify %s: %s", args.result, str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE if type(e) is UsageError else EXIT_ERROR
    print(json.dumps({"certified": certified}) if args.json else str(certified).lower())
    return EXIT_OK if certified else EXIT_ERROR


def _run_rank(args: argparse.Namespace) -> int:
    try:
        if args.tuple is not None:
            if len(args.tuple) != args.l:
                raise UsageError(f"--tuple has {len(args.tuple)} components, expected {args.l}")
            k = sigma_rank(args.l, args.tuple)
            index = args.tuple
            print(k)
        else:
            k = args.index
            index = sigma_unrank(args.l, k)
            print(",".join(map(str, index)))
    except DalgError as e:
        print(f"dalg: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.verbose:
        operators = " ".join(f"∂_{slot + 1}" + (f"^{n}" if n > 1 else "") for slot, n in enumerate(index) if n)
        print(f"θ^{k} = {operators or 'id'}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the dalg command line."""
    args = build_parser().parse_args(argv)
    try:
        level = get_log_level(args.verbose)
    except ValueError as e:
        print(f"dalg: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(levelname)-8s - %(name)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )

    if args.command == "verify":
        return _run_verify(args)
    if args.command == "rank":
        return _run_rank(args)
    return _run_engine_command(args)
