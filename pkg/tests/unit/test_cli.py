import json

import pytest

from src.cli import EXIT_ERROR, EXIT_NOT_FOUND, EXIT_OK, EXIT_USAGE, main


@pytest.fixture
def broken_file(tmp_path):
    path = tmp_path / "broken.dalg"
    path.write_text("D[x](y) = y;\nz = * y\n", encoding="utf-8")
    return str(path)


class TestRank:
    def test_rank(self, capsys):
        assert main(["rank", "--l", "2", "--tuple", "1,2"]) == EXIT_OK
        assert capsys.readouterr().out == "8\n"

    def test_unrank(self, capsys):
        assert main(["rank", "--l", "2", "--index", "8"]) == EXIT_OK
        assert capsys.readouterr().out == "1,2\n"

    def test_verbose(self, capsys):
        assert main(["rank", "-v", "--l", "2", "--tuple", "1,2"]) == EXIT_OK
        assert capsys.readouterr().out.splitlines() == ["8", "θ^8 = ∂_1 ∂_2^2"]

    def test_length_mismatch(self, capsys):
        assert main(["rank", "--l", "2", "--tuple", "1,2,3"]) == EXIT_USAGE
        assert "expected 2" in capsys.readouterr().err

    def test_tuple_and_index_are_exclusive(self):
        with pytest.raises(SystemExit) as e:
            main(["rank", "--l", "2", "--tuple", "1,2", "--index", "8"])
        assert e.value.code == EXIT_USAGE


def test_missing_subcommand():
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == EXIT_USAGE


class TestEngines:
    def test_uni(self, data_dir, capsys):
        assert main(["uni", "-i", str(data_dir / "scaled_exp.dalg")]) == EXIT_OK
        assert capsys.readouterr().out == "D[x](z) - z = 0\n"

    def test_json(self, data_dir, capsys):
        assert main(["unary", "-i", str(data_dir / "scaled_exp.dalg"), "--json"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["status"] == "ok"
        assert report["poly"] == "D[x](z) - z = 0"
        assert report["order"] == 1

    def test_latex(self, data_dir, capsys):
        assert main(["uni", "-i", str(data_dir / "scaled_exp.dalg"), "--latex"]) == EXIT_OK
        assert capsys.readouterr().out == "\\partial_{x} z - z = 0\n"

    def test_parse_error(self, broken_file, capsys):
        assert main(["uni", "-i", broken_file]) == EXIT_ERROR
        assert capsys.readouterr().out.startswith("error: ParseError: line 2, column 5")

    def test_not_found(self, data_dir, capsys):
        assert main(["multi", "-i", str(data_dir / "bivariate_sum.dalg"), "--maxord", "0,0"]) == EXIT_NOT_FOUND
        assert capsys.readouterr().out == "not_found: No ADE of order componentwise at most (0,0) found\n"

    @pytest.mark.parametrize(
        "argv",
        [
            ["multi", "-i", "bivariate_sum.dalg", "--maxord", "1,2,3"],
            ["uni", "-i", "circle_plus_exp.dalg", "--lho", "false", "--diff-first"],
            ["uni", "-i", "circle_plus_exp.dalg", "--lhoplex", "--ordering", "lexdeg"],
            ["unary", "-i", "circle_plus_exp.dalg"],
            ["uni", "-i", "scaled_exp.dalg", "--max-workers", "0"],
            ["uni", "-i", "scaled_exp.dalg", "--max-pairs", "0"],
        ],
    )
    def test_usage_errors(self, data_dir, argv):
        argv = [str(data_dir / arg) if arg.endswith(".dalg") else arg for arg in argv]
        assert main(argv) == EXIT_USAGE

    def test_invalid_maxord(self, data_dir):
        with pytest.raises(SystemExit) as e:
            main(["multi", "-i", str(data_dir / "bivariate_sum.dalg"), "--maxord", "a,b"])
        assert e.value.code == EXIT_USAGE

    def test_batch(self, data_dir, broken_file, capsys):
        assert main(["uni", "-i", str(data_dir / "scaled_exp.dalg"), "-i", broken_file]) == EXIT_ERROR
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "scaled_exp.dalg: D[x](z) - z = 0"
        assert lines[1].startswith("broken.dalg: error: ParseError")

    def test_output_dir(self, data_dir, tmp_path):
        out = tmp_path / "results"
        assert main(["uni", "-i", str(data_dir / "scaled_exp.dalg"), "-o", str(out)]) == EXIT_OK
        assert sorted(p.name for p in out.iterdir()) == ["scaled_exp_ade.json", "scaled_exp_ade.txt"]


class TestVerify:
    @pytest.fixture
    def report(self, data_dir, tmp_path):
        assert main(["uni", "-i", str(data_dir / "scaled_exp.dalg"), "-o", str(tmp_path)]) == EXIT_OK
        return str(tmp_path / "scaled_exp_ade.json")

    def verify(self, data_dir, report, series, *extra):
        argv = ["verify", "-i", str(data_dir / "scaled_exp.dalg"), "--result", report, "--series", series]
        return main(argv + ["--trunc", "10", *extra])

    def test_certified(self, data_dir, report, capsys):
        capsys.readouterr()
        assert self.verify(data_dir, report, "y = exp(x)") == EXIT_OK
        assert capsys.readouterr().out == "true\n"

    def test_rejected(self, data_dir, report, capsys):
        capsys.readouterr()
        assert self.verify(data_dir, report, "y = cos(x)", "--json") == EXIT_ERROR
        assert json.loads(capsys.readouterr().out) == {"certified": False}

    def test_bad_series(self, data_dir, report):
        assert self.verify(data_dir, report, "y = exp(1 + x)") == EXIT_USAGE

    def test_missing_report(self, data_dir, tmp_path):
        assert self.verify(data_dir, str(tmp_path / "missing.json"), "y = exp(x)") == EXIT_ERROR

    def test_missing_system_file(self, tmp_path):
        argv = ["verify", "-i", str(tmp_path / "none.dalg"), "--result", "r.json", "--series", "y = x", "--trunc", "5"]
        assert main(argv) == EXIT_USAGE
