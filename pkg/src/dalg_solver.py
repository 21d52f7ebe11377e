"""dalg task orchestration: parse a system file, run an engine, save the result."""

import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

from src.algebra.utils import GroebnerBudget
from src.data_models.options import EngineMode, MultiOptions, PrintStyle, UniOptions
from src.data_models.results import AdeOutcome, AdeResult, FileRun
from src.engines.multivariate import arithmetic_multi
from src.engines.seriescheck import certify
from src.engines.univariate import arithmetic_uni, unary_uni
from src.exceptions import DalgError, UsageError
from src.frontend.parser import (
    ParsedSystem,
    parse_ade,
    parse_parameters,
    parse_series_spec,
    parse_system,
    target_series,
)
from src.frontend.printer import build_report, print_ade
from src.services import ResultHandlerError, ResultSaver

EngineOptions = Union[UniOptions, MultiOptions]


def run_engine(
    mode: EngineMode,
    parsed: ParsedSystem,
    options: Optional[EngineOptions] = None,
    budget: Optional[GroebnerBudget] = None,
) -> AdeOutcome:
    """Dispatch a parsed system to the engine of ``mode``.

    Raises:
        UsageError: If the options do not belong to the engine, or unary mode gets several inputs
    """
    target = parsed.target
    if mode is EngineMode.MULTI:
        if options is not None and not isinstance(options, MultiOptions):
            raise UsageError("The multivariate engine takes MultiOptions")
        return arithmetic_multi(parsed.ades, target.expr, options, target.name, budget)
    if options is not None and not isinstance(options, UniOptions):
        raise UsageError("The univariate engines take UniOptions")
    if parsed.context.l != 1:
        raise UsageError(
            f"The univariate engines need one independent variable, got {list(parsed.context.independents)}; "
            "use `multi`"
        )
    if mode is EngineMode.UNARY:
        if len(parsed.ades) != 1:
            raise UsageError(f"unary takes exactly one input ADE, got {len(parsed.ades)}")
        return unary_uni(parsed.ades[0], target.expr, options, target.name, budget)
    return arithmetic_uni(parsed.ades, target.expr, options, target.name, budget)


def _failed(file_name: str, mode: EngineMode, e: Exception) -> FileRun:
    return FileRun(
        file_name=file_name, mode=mode.name.lower(), error=f"{type(e).__name__}: {e}", error_kind=type(e).__name__
    )


def process_file(
    file_name: str,
    file_content: str,
    mode: EngineMode,
    options: Optional[EngineOptions] = None,
    output_dir: Optional[str] = None,
    style: PrintStyle = PrintStyle.ASCII,
    budget: Optional[GroebnerBudget] = None,
) -> FileRun:
    """Process one system file.

    Processing steps:
    1. Parse the declarations, input ADEs and target
    2. Run the engine of ``mode``
    3. Save the report, the ascii equation and (for latex style) the LaTeX equation when ``output_dir`` is given

    Failures are logged and reported in the returned FileRun rather than raised.

    Args:
        file_name: The name of the file being processed
        file_content: The content of the file
        mode: Engine to run
        options: Engine options
        output_dir: Directory to save the results to, or None
        style: Notation of the saved equation
        budget: Gröbner resource limits

    Returns:
        FileRun with the outcome or the error
    """
    try:
        parsed = parse_system(file_content)
    except DalgError as e:
        logging.error("Failed to parse %s: %s", file_name, str(e))
        return _failed(file_name, mode, e)

    try:
        outcome = run_engine(mode, parsed, options, budget)
    except DalgError as e:
        logging.error("Failed to compute an ADE for %s: %s", file_name, str(e))
        return _failed(file_name, mode, e)

    run = FileRun(file_name=file_name, mode=mode.name.lower(), outcome=outcome)
    if output_dir is not None:
        report = build_report(outcome)
        latex = ""
        if isinstance(outcome, AdeResult) and style is PrintStyle.LATEX:
            latex = print_ade(outcome, PrintStyle.LATEX)
        try:
            run.saved_files = ResultSaver.save_ade(file_name, report, output_dir, latex)
        except ResultHandlerError as e:
            logging.error("Failed to save results for %s: %s", file_name, str(e))
    return run


async def process_files_async(
    paths: Sequence[str],
    mode: EngineMode,
    options: Optional[EngineOptions] = None,
    output_dir: Optional[str] = None,
    style: PrintStyle = PrintStyle.ASCII,
    budget: Optional[GroebnerBudget] = None,
    max_workers: int = 2,
) -> list[FileRun]:
    """Process several files in parallel using a thread pool.

    Args:
        paths: System files to process
        mode: Engine to run
        options: Engine options shared by every file
        output_dir: Directory to save results to, or None
        style: Notation of the saved equations
        budget: Gröbner resource limits
        max_workers: Maximum number of concurrent workers

    Returns:
        One FileRun per path, in input order
    """

    def process_file_wrapper(path: str) -> FileRun:
        file_name = Path(path).name
        try:
            with open(path, "r", encoding="utf-8") as f:
                file_content = f.read()
        except OSError as e:
            logging.error("Failed to read %s: %s", path, str(e))
            return FileRun(file_name=file_name, mode=mode.name.lower(), error=f"Failed to read {path}: {e}")

        logging.info("Processing %s...", file_name)
        run = process_file(file_name, file_content, mode, options, output_dir, style, budget)
        logging.info("Completed %s with status %s", file_name, run.status.name.lower())
        return run

    loop = asyncio.get_running_loop()
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        tasks = [loop.run_in_executor(executor, partial(process_file_wrapper, path)) for path in paths]
        return list(await asyncio.gather(*tasks))


def verify_file(
    system_text: str,
    report_path: str,
    series_spec: str,
    trunc: int,
    parameter_items: Sequence[str] = (),
) -> bool:
    """Certify a saved result against truncated series solutions of the system's inputs.

    Args:
        system_text: The system file the result was computed from
        report_path: JSON report written by the solver
        series_spec: Series of the input indeterminates, e.g. ``"y1 = cos(x); y2 = exp(x)"``
        trunc: Truncation degree
        parameter_items: ``name=value`` parameter specializations

    Returns:
        Whether the ADE annihilates the target series up to the trusted degree

    Raises:
        UsageError: If the report is not an ok result or the series cannot be evaluated
        ResultHandlerError: If the report cannot be loaded
    """
    report = ResultSaver.load_report(report_path)
    if report.status != "ok" or report.poly is None:
        raise UsageError(f"{report_path} holds no ADE (status {report.status})")
    parsed = parse_system(system_text)
    independents = list(report.independents)
    if tuple(independents) != parsed.context.independents:
        declared = list(parsed.context.independents)
        raise UsageError(f"Report variables {independents} differ from the system variables {declared}")
    parameters: Mapping = parse_parameters(parameter_items)
    polynomial = parse_ade(report.poly, independents, report.output or "z")
    ade = AdeResult(
        polynomial=polynomial,
        output=report.output or "z",
        independents=tuple(independents),
        order=tuple(report.order) if isinstance(report.order, list) else report.order,
        degree=report.degree,
    )
    series = parse_series_spec(series_spec, independents, trunc, parameters)
    assignment = target_series(parsed, series, parameters)
    return certify(ade, assignment, parameters, trunc)
