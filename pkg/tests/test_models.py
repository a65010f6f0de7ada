"""Tests for model files and the built-in models."""

import pytest

from dglm.core.exactlin import q
from dglm.errors import InvalidModel, ModelParseError
from dglm.models import (
    ModelFile,
    ModelSpec,
    boundary_model,
    cp_inclusion,
    cp_model,
    disk_pairs,
    format_model_file,
    parse_model_file,
    resolve,
    sphere_model,
)
from dglm.models.builtin import builtin_lie, is_builtin
from dglm.models.parser import Bracket, Gen, Sum, evaluate, format_expr, parse_expr


def test_expressions_parse_into_brackets_and_sums():
    assert parse_expr("x1") == Gen("x1")
    assert parse_expr("[a, [a, b]]") == Bracket(Gen("a"), Bracket(Gen("a"), Gen("b")))
    assert parse_expr("1/2*[x1, x1]") == Sum(((q(1, 2), Bracket(Gen("x1"), Gen("x1"))),))
    assert parse_expr("0") == Sum(())


def test_expressions_print_canonically():
    for text in ("-[a, b] + 2*c", "u - [x1, x2]", "1/2*[x1, x1]", "0"):
        assert format_expr(parse_expr(text)) == text


@pytest.mark.parametrize("text", ["2", "a +", "[a b]", "a $ b", "3*"])
def test_malformed_expressions(text):
    with pytest.raises(ModelParseError):
        parse_expr(text)


def test_evaluate_checks_degrees():
    degrees = {"a": 1, "b": 2}
    assert evaluate(parse_expr("[a, a]"), degrees, 2).degree == 2
    assert not evaluate(parse_expr("0"), degrees, 5)
    with pytest.raises(ModelParseError, match="inhomogeneous"):
        evaluate(parse_expr("a + b"), degrees, 1)
    with pytest.raises(ModelParseError, match="expected 3"):
        evaluate(parse_expr("b"), degrees, 3)
    with pytest.raises(ModelParseError, match="unknown generator"):
        evaluate(parse_expr("c"), degrees, 1)


def test_model_file_round_trip(fixtures_dir):
    models = parse_model_file((fixtures_dir / "cp1_cp2.model").read_text())
    assert [m.name for m in models.models] == ["A", "X"]
    assert models.map().source == "A"
    assert parse_model_file(format_model_file(models)) == models
    i = models.build_map(6)
    assert i.is_free_extension


def test_lines_before_a_header_belong_to_l(fixtures_dir):
    models = parse_model_file((fixtures_dir / "anonymous.model").read_text())
    L = models.model().build(5)
    assert L.name == "L"
    assert L.d_of("b") == L.generator("a")


def test_parse_errors_carry_line_numbers(fixtures_dir):
    with pytest.raises(ModelParseError, match="line 3"):
        parse_model_file((fixtures_dir / "bad_degree.model").read_text())
    with pytest.raises(ModelParseError, match="defined twice"):
        parse_model_file("model A\nmodel A\n")
    with pytest.raises(ModelParseError, match="unknown model"):
        parse_model_file("model A\ngenerator u degree 2\nmap i : A -> B\n")
    with pytest.raises(ModelParseError, match="unrecognised"):
        parse_model_file("model A\nlet u = 2\n")


def test_maps_must_commute_with_d(fixtures_dir):
    models = parse_model_file((fixtures_dir / "not_a_morphism.model").read_text())
    with pytest.raises(InvalidModel, match="not a dg Lie morphism"):
        models.build_map(4)


def test_model_selection():
    models = cp_inclusion(1, 2)
    with pytest.raises(InvalidModel, match="choose a model"):
        models.model()
    with pytest.raises(InvalidModel, match="no model named"):
        models.model("Y")
    with pytest.raises(InvalidModel, match="none defined"):
        ModelFile((cp_model(1),)).map()
    with pytest.raises(InvalidModel, match="unknown generator"):
        ModelSpec("B", (("a", 1),), (("z", Gen("a")),)).build(4)


def test_cp_models():
    text = format_model_file(ModelFile((cp_model(3),)))
    assert "generator x3 degree 5" in text
    assert "d x2 = 1/2*[x1, x1]" in text
    assert "d x3 = [x1, x2]" in text
    with pytest.raises(InvalidModel):
        cp_model(0)
    with pytest.raises(InvalidModel):
        cp_inclusion(2, 2)


def test_spheres_and_disks():
    assert sphere_model(4).generators == (("u", 2),)
    with pytest.raises(InvalidModel):
        sphere_model(2)
    first, second = disk_pairs()
    assert first.cofibration and not second.cofibration
    assert first.file.build_map(6).is_free_extension
    assert not second.file.build_map(6).is_free_extension


def test_boundary_model():
    models = boundary_model()
    assert "d v = u - [x1, x2]" in format_model_file(models)
    i = models.build_map(5)
    assert sorted(i.complement()) == ["v", "x1", "x2"]
    with pytest.raises(InvalidModel, match="expected 2"):
        boundary_model({"x1": 1, "x2": 2})


def test_builtin_references():
    assert is_builtin("builtin:cp:2") and not is_builtin("cp:2")
    assert resolve("builtin:cp:1:2").map().name == "i"
    assert resolve("disk:2") == disk_pairs()[1].file
    assert builtin_lie("builtin:sphere:4", 6).dim(2) == 1
    for bad in ("builtin:cp:x", "builtin:torus:2", "builtin:disk:3"):
        with pytest.raises(InvalidModel):
            resolve(bad)
