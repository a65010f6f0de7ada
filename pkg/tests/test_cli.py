"""Tests for the dglm command line."""

import pytest
from typer.testing import CliRunner

from dglm import __version__
from dglm.cli import _agreement, app
from dglm.core.exactlin import homology
from dglm.models import ModelFile, cp_model, format_model_file
from dglm.report import Check

from .conftest import two_term


@pytest.fixture
def runner():
    return CliRunner()


def machine_lines(output: str) -> list[str]:
    return output.splitlines()


def test_version(runner):
    result = runner.invoke(app, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_example_prints_model_text(runner):
    result = runner.invoke(app, ["example", "cp", "-k", "2"])
    assert result.exit_code == 0
    assert result.output == format_model_file(ModelFile((cp_model(2),)))
    inclusion = runner.invoke(app, ["example", "cp", "-k", "1", "-n", "2"])
    assert "map i : CP1 -> CP2" in inclusion.output


def test_homology_machine_report(runner):
    result = runner.invoke(app, ["homology", "-m", "builtin:cp:2", "-N", "8", "-f", "machine"])
    assert result.exit_code == 0
    lines = machine_lines(result.output)
    assert lines[0] == "command\tdglm homology --model builtin:cp:2 --of lie --max-degree 8"
    assert lines[1] == "models\tCP2"
    assert lines[2] == "valid_degrees\t1..7"
    assert "degree=1\tdim=1\tdim_H=1" in lines
    assert "degree=2\tdim=1\tdim_H=0" in lines
    assert "degree=4\tdim=1\tdim_H=1" in lines
    assert "degree=0\tdim=0\tdim_H=?" in lines


def test_homology_table_report(runner):
    result = runner.invoke(app, ["homology", "-m", "builtin:sphere:4", "--of", "ce", "-N", "6"])
    assert result.exit_code == 0
    assert "valid degrees: 1..6" in result.output
    assert "dim_H" in result.output


def test_report_file_matches_output(runner, tmp_path):
    path = tmp_path / "cp2.txt"
    result = runner.invoke(
        app, ["homology", "-m", "builtin:cp:2", "-N", "6", "-f", "machine", "--report", str(path)]
    )
    assert result.exit_code == 0
    assert path.read_text() == result.output


def test_degree_cap_needs_force(runner):
    result = runner.invoke(app, ["homology", "-m", "builtin:cp:1", "-N", "25"])
    assert result.exit_code == 3
    assert "--force" in result.output


def test_unknown_suite(runner):
    result = runner.invoke(app, ["verify", "nonsense", "-m", "builtin:cp:2"])
    assert result.exit_code == 2
    assert "unknown suite" in result.output


@pytest.mark.parametrize("suite", ["dsquare", "jacobi", "mc", "ses"])
def test_suites_pass_on_cp_inclusion(runner, suite):
    result = runner.invoke(app, ["verify", suite, "-m", "builtin:cp:1:2", "-N", "6", "-f", "machine"])
    assert result.exit_code == 0, result.output
    assert "verdict=fail" not in result.output
    assert "verdict=pass" in result.output


def test_baut_rel_for_cp_inclusion(runner):
    result = runner.invoke(app, ["baut-rel", "-m", "builtin:cp:1:2", "-N", "6", "-f", "machine"])
    assert result.exit_code == 0, result.output
    lines = machine_lines(result.output)
    assert "valid_degrees\t1..1" in lines
    row = next(line for line in lines if line.startswith("degree=1\t"))
    assert "dim_H=1" in row
    assert "dim_H_model=1" in row
    assert "shifted_degree=4" in row


@pytest.mark.parametrize(
    ("ref", "cutoff", "top"),
    [("builtin:disk:1", "8", 2), ("builtin:boundary", "7", 2), ("builtin:cp:2:3", "12", 4)],
)
def test_baut_rel_pipelines_agree(runner, ref, cutoff, top):
    result = runner.invoke(app, ["baut-rel", "-m", ref, "-N", cutoff, "-f", "machine"])
    assert result.exit_code == 0, result.output
    assert "verdict=fail" not in result.output
    assert "verdict=?" not in result.output
    agree = next(line for line in machine_lines(result.output) if line.startswith("check=pipelines agree on "))
    assert "verdict=pass" in agree
    lo, hi = agree.split("\t")[0].removeprefix("check=pipelines agree on ").split("..")
    assert int(lo) == 1
    assert int(hi) >= top
    if ref.endswith("disk:1"):
        dims = [f for line in machine_lines(result.output) for f in line.split("\t") if f.startswith("dim_H=")]
        assert dims and set(dims) <= {"dim_H=0", "dim_H=?"}


def test_baut_rel_refuses_maps_that_are_not_free(runner):
    result = runner.invoke(app, ["baut-rel", "-m", "builtin:disk:2", "-N", "6"])
    assert result.exit_code == 2
    assert "cofibration" in result.output


def test_baut_rel_vanishing_mode(runner):
    result = runner.invoke(app, ["baut-rel", "-m", "builtin:disk:2", "--vanishing", "-N", "6", "-f", "machine"])
    assert result.exit_code == 0, result.output
    assert "vanishing-derivations mode" in result.output
    row = next(line for line in machine_lines(result.output) if line.startswith("degree=1\t"))
    assert "dim_H=1" in row


def test_agreement_needs_a_common_degree():
    c = two_term(False)
    both = _agreement(homology(c, 0, 1), homology(c, 0, 1))
    assert both == Check("pipelines agree on 0..1", True, None)
    disjoint = _agreement(homology(c, 0, 1), homology(c, -1, -1, strict=False))
    assert disjoint.ok is None
    assert disjoint.witness == "no degree is valid in both pipelines"


def test_verify_with_a_sample_reports_question_marks(runner):
    result = runner.invoke(
        app, ["verify", "jacobi", "-m", "builtin:cp:2", "-N", "8", "--sample", "1", "-f", "machine"]
    )
    assert result.exit_code == 0, result.output
    lines = machine_lines(result.output)
    assert lines[0] == "command\tdglm verify jacobi --model builtin:cp:2 --max-degree 8 --sample 1"
    assert any("verdict=?" in line for line in lines)
    assert "verdict=fail" not in result.output
    assert "note\tchecks marked ? were cut short or not run: they neither pass nor fail" in lines


def test_parse_check_file(runner, fixtures_dir):
    result = runner.invoke(app, ["parse-check", "-m", str(fixtures_dir / "cp1_cp2.model"), "-f", "machine"])
    assert result.exit_code == 0, result.output
    assert "check=parse(print(file)) = file\tverdict=pass\twitness=-" in result.output
    assert "note\tmap i: A -> X is a free extension" in result.output


def test_parse_check_stdin(runner):
    text = runner.invoke(app, ["example", "boundary"]).output
    result = runner.invoke(app, ["parse-check", "-m", "-", "-N", "5", "-f", "machine"], input=text)
    assert result.exit_code == 0, result.output
    assert "models\tA,X" in result.output


def test_parse_errors_exit_2(runner, fixtures_dir):
    result = runner.invoke(app, ["parse-check", "-m", str(fixtures_dir / "bad_degree.model")])
    assert result.exit_code == 2
    assert "line 3" in result.output
