"""Tests for report rendering."""

from dglm.core.dglie import SuiteResult
from dglm.core.exactlin import Verdict, Witness, homology
from dglm.report import Check, OutputFormat, Report, render_machine, render_text

from .conftest import two_term


def test_checks_from_results():
    witness = Witness("jacobi", 3, "(a,b,c)")
    assert Check.of("L", SuiteResult("jacobi", 5)) == Check("L:jacobi", True, None)
    assert Check.of("", SuiteResult("jacobi", 5, witness)).name == "jacobi"
    assert Check.of("map", Verdict(False, witness)).witness == str(witness)
    assert Check.of("flag", True, "unused") == Check("flag", True, None)


def test_unknown_degrees_print_as_question_marks():
    rep = Report("dglm homology", ["split"])
    rep.add_column("dim", {-1: 0, 0: 1, 1: 1, 2: 0})
    rep.add_homology(homology(two_term(False), -1, 2, strict=False))
    assert (rep.lo, rep.hi) == (0, 1)
    text = render_machine(rep)
    assert "valid_degrees\t0..1" in text
    assert "degree=-1\tdim=0\tdim_H=?" in text
    assert "degree=0\tdim=1\tdim_H=1" in text


def test_failed_checks_mark_the_report():
    rep = Report("dglm verify", ["L"], checks=[Check("a", True), Check("b", False, "x\ty")])
    assert not rep.ok
    assert "check=b\tverdict=fail\twitness=x y" in render_machine(rep)
    table = render_text(rep, OutputFormat.table)
    assert "FAIL" in table
    assert "valid degrees: none" in table


def test_cut_short_checks_print_a_question_mark():
    capped = Check.of("L", SuiteResult("jacobi", 5, truncated=True))
    assert capped.ok is None
    assert capped.witness == "sample limit reached after 5 cases"
    assert Check.of("map", Verdict(True, truncated=True)).ok is None
    assert Check.of("map", Verdict(False, Witness("f", 2, "x"), truncated=True)).ok is False

    rep = Report("dglm verify", ["L"], checks=[Check("a", True), capped])
    assert rep.ok
    assert not rep.complete
    assert "check=L:jacobi\tverdict=?\twitness=sample limit reached after 5 cases" in render_machine(rep)
    assert "pass" in render_text(rep, OutputFormat.table)
