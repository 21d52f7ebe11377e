import asyncio
import json
import os

import pytest

from src.dalg_solver import process_file, process_files_async, run_engine, verify_file
from src.data_models.options import EngineMode, MultiOptions, PrintStyle, UniOptions
from src.data_models.results import AdeResult, AdeStatus, NotFound
from src.exceptions import UsageError
from src.frontend.parser import parse_system
from src.services import ResultHandlerError

SCALED_EXP = "D[x](y) = y; z = 2*y"
BIVARIATE_SUM = "vars x1, x2; x2*D[x1,x2](y1) + D[x2](y1) = 0; x1*D[x1](y2) - D[x1,x1](y2) = 0; z = y1 + y2"


class TestRunEngine:
    def test_uni(self):
        outcome = run_engine(EngineMode.UNI, parse_system(SCALED_EXP))
        assert isinstance(outcome, AdeResult)

    def test_options_must_match_engine(self):
        with pytest.raises(UsageError):
            run_engine(EngineMode.UNI, parse_system(SCALED_EXP), MultiOptions())
        with pytest.raises(UsageError):
            run_engine(EngineMode.MULTI, parse_system(SCALED_EXP), UniOptions())

    def test_univariate_needs_one_variable(self):
        with pytest.raises(UsageError):
            run_engine(EngineMode.UNI, parse_system(BIVARIATE_SUM))

    def test_unary_takes_one_input(self):
        with pytest.raises(UsageError):
            run_engine(EngineMode.UNARY, parse_system("D[x](y1) = y1; D[x](y2) = 2*y2; z = y1 + y2"))

    def test_multi_not_found(self):
        outcome = run_engine(EngineMode.MULTI, parse_system(BIVARIATE_SUM), MultiOptions(maxord=(0, 0)))
        assert isinstance(outcome, NotFound)


class TestProcessFile:
    def test_ok(self):
        run = process_file("scaled_exp.dalg", SCALED_EXP, EngineMode.UNI)
        assert run.status is AdeStatus.OK
        assert run.exit_code == 0
        assert run.mode == "uni"
        assert run.saved_files == []

    def test_parse_error(self):
        run = process_file("broken.dalg", "D[x](y) = y; z = * y", EngineMode.UNI)
        assert run.status is AdeStatus.ERROR
        assert run.error_kind == "ParseError"
        assert run.error.startswith("ParseError: line 1")
        assert run.exit_code == 1

    def test_usage_error(self):
        run = process_file("sum.dalg", BIVARIATE_SUM, EngineMode.UNARY)
        assert run.error_kind == "UsageError"

    def test_saves_results(self, tmp_path):
        run = process_file("scaled_exp.dalg", SCALED_EXP, EngineMode.UNI, output_dir=str(tmp_path))
        assert [os.path.basename(p) for p in run.saved_files] == ["scaled_exp_ade.json", "scaled_exp_ade.txt"]
        with open(run.saved_files[0], encoding="utf-8") as f:
            assert json.load(f)["poly"] == "D[x](z) - z = 0"

    def test_saves_latex(self, tmp_path):
        run = process_file(
            "scaled_exp.dalg", SCALED_EXP, EngineMode.UNI, output_dir=str(tmp_path), style=PrintStyle.LATEX
        )
        assert len(run.saved_files) == 3
        with open(run.saved_files[2], encoding="utf-8") as f:
            assert f.read() == "\\partial_{x} z - z = 0\n"

    def test_not_found_report_is_saved(self, tmp_path):
        opts = MultiOptions(maxord=(0, 0))
        run = process_file("sum.dalg", BIVARIATE_SUM, EngineMode.MULTI, opts, output_dir=str(tmp_path))
        assert run.exit_code == 2
        assert len(run.saved_files) == 1


def test_process_files_async(data_dir, tmp_path):
    paths = [str(data_dir / "scaled_exp.dalg"), str(tmp_path / "missing.dalg"), str(data_dir / "bivariate_sum.dalg")]
    runs = asyncio.run(process_files_async(paths, EngineMode.UNI, max_workers=2))
    assert [run.file_name for run in runs] == ["scaled_exp.dalg", "missing.dalg", "bivariate_sum.dalg"]
    assert [run.status for run in runs] == [AdeStatus.OK, AdeStatus.ERROR, AdeStatus.ERROR]
    assert runs[1].error.startswith("Failed to read")
    assert runs[2].error_kind == "UsageError"


class TestVerify:
    @pytest.fixture
    def report_path(self, tmp_path):
        run = process_file("scaled_exp.dalg", SCALED_EXP, EngineMode.UNI, output_dir=str(tmp_path))
        return run.saved_files[0]

    def test_certified(self, report_path):
        assert verify_file(SCALED_EXP, report_path, "y = exp(x)", 10)

    def test_rejected(self, report_path):
        assert not verify_file(SCALED_EXP, report_path, "y = sin(x)", 10)

    def test_not_found_report(self, tmp_path):
        run = process_file("sum.dalg", BIVARIATE_SUM, EngineMode.MULTI, MultiOptions(maxord=(0, 0)), str(tmp_path))
        with pytest.raises(UsageError):
            verify_file(BIVARIATE_SUM, run.saved_files[0], "y1 = x2; y2 = x1", 10)

    def test_variables_must_match(self, report_path):
        with pytest.raises(UsageError):
            verify_file("D[t](y) = y; z = 2*y", report_path, "y = exp(t)", 10)

    def test_missing_report(self, tmp_path):
        with pytest.raises(ResultHandlerError):
            verify_file(SCALED_EXP, str(tmp_path / "missing.json"), "y = exp(x)", 10)
