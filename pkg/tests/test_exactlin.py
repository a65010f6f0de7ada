"""Tests for exact linear algebra and chain complexes."""

import pytest

from dglm.core.exactlin import (
    ONE,
    ChainComplex,
    GradedLinearMap,
    Sampler,
    SpanBasis,
    connected_cover,
    cycles,
    format_rational,
    homology,
    identity_map,
    induced_map_on_homology,
    kernel_basis,
    mapping_cone,
    q,
    solve,
    vec_add,
    vec_sub,
    verify_chain_map,
    zero_map,
)
from dglm.errors import DegreeRangeExceeded, InvalidModel, NotAChainMap, NotInSpan

from .conftest import two_term


def test_rationals_parse_and_print():
    assert q("3/4") == q(3, 4)
    assert q(" -2 ") == q(-2)
    assert format_rational(q(6, 8)) == "3/4"
    assert format_rational(q(-4, 2)) == "-2"


def test_sparse_vectors_prune_zeros():
    assert vec_add({"a": q(1)}, {"a": q(-1), "b": q(2)}) == {"b": q(2)}
    assert vec_sub({"a": q(1, 2)}, {"a": q(1, 2)}) == {}


def test_kernel_basis_exact():
    basis = kernel_basis([[1, 1, 0], [0, 0, 1]])
    assert len(basis) == 1
    (v,) = basis
    assert v[0] == -v[1] and v[1] != 0 and v[2] == 0


def test_solve_and_span():
    cols = [{"x": ONE}, {"x": ONE, "y": ONE}]
    assert solve(cols, {"y": q(2)}) == [q(-2), q(2)]
    assert solve([{"x": ONE}], {"y": ONE}) is None

    span = SpanBasis([{"x": ONE}, {"x": q(2)}, {"y": ONE}])
    assert len(span) == 2
    assert span.contains({"x": q(1, 3), "y": q(5)})
    with pytest.raises(NotInSpan):
        span.coordinates({"z": ONE})


def test_d_squared_checked_on_build():
    images = {1: {"b": {"a": ONE}}, 2: {"c": {"b": ONE}}}
    with pytest.raises(InvalidModel):
        ChainComplex.build({0: ["a"], 1: ["b"], 2: ["c"]}, images, -1, 3, "bad")


def test_homology_of_acyclic_and_split_complexes():
    assert homology(two_term(True), 0, 1).dims() == {0: 0, 1: 0}
    assert homology(two_term(False), 0, 1).dims() == {0: 1, 1: 1}


def test_homology_range_is_explicit():
    c = two_term(False)
    with pytest.raises(DegreeRangeExceeded):
        homology(c, -1, 1)
    loose = homology(c, -1, 2, strict=False)
    assert loose.dims() == {-1: None, 0: 1, 1: 1, 2: None}
    with pytest.raises(DegreeRangeExceeded):
        loose.dim(2)


def test_cycles_respect_lower_bound():
    c = two_term(True)
    assert cycles(c, 1) == []
    with pytest.raises(DegreeRangeExceeded):
        cycles(c, -1)


def test_identity_is_a_chain_map_and_quasi_isomorphism():
    c = two_term(False)
    f = identity_map(c)
    assert verify_chain_map(f, c, c)
    assert induced_map_on_homology(f, c, c, 0, 1).is_quasi_isomorphism


def test_non_chain_map_reports_witness():
    src, tgt = two_term(True), two_term(False)
    images = {n: {lab: {lab: ONE} for lab in src.basis(n)} for n in range(-1, 3)}
    f = GradedLinearMap(src.space, tgt.space, 0, images, -1, 2, name="f")
    verdict = verify_chain_map(f, src, tgt)
    assert not verdict
    assert verdict.witness.degree == 1
    assert verdict.witness.element == "b"
    with pytest.raises(NotAChainMap):
        induced_map_on_homology(f, src, tgt, 0, 1)


def test_zero_map_between_acyclic_complexes_is_iso():
    c = two_term(True)
    assert induced_map_on_homology(zero_map(c, c), c, c, 0, 1).is_quasi_isomorphism


def test_zero_map_on_nontrivial_homology_is_not_iso():
    c = two_term(False)
    induced = induced_map_on_homology(zero_map(c, c), c, c, 0, 1)
    assert induced.iso == {0: False, 1: False}


def test_cone_of_identity_is_acyclic():
    c = two_term(False)
    cone = mapping_cone(identity_map(c), c, c)
    assert cone.basis(1) == ("s:a", "t:b")
    assert homology(cone, 1, 1).dims() == {1: 0}


def test_cone_carries_the_source_differential():
    c = two_term(True)
    cone = mapping_cone(identity_map(c), c, c)
    assert (cone.lo, cone.hi) == (0, 2)
    assert cone.d(2, {"s:b": ONE}) == {"t:b": -ONE, "s:a": -ONE}
    assert cone.d(1, cone.d(2, {"s:b": ONE})) == {}
    assert homology(cone, 1, 1).dims() == {1: 0}


def test_connected_cover_keeps_cycles_only():
    c = two_term(True)
    cover = connected_cover(c, 1).complex
    assert cover.dim(1) == 0
    assert cover.dim(2) == 0
    split = connected_cover(two_term(False), 0).complex
    assert split.dim(0) == 1
    assert split.dim(1) == 1


def test_sampler_marks_cut_short_batches():
    sampler = Sampler(3)
    assert list(sampler.take(range(3))) == [0, 1, 2]
    assert not sampler.truncated
    assert list(sampler.take(range(5))) == [0, 1, 2]
    assert sampler.truncated
    assert sampler.count == 6
    verdict = sampler.verdict()
    assert verdict.ok and verdict.truncated and not verdict

    exhaustive = Sampler()
    assert len(list(exhaustive.take(range(1000)))) == 1000
    assert exhaustive.verdict()
