"""Tests for derivation complexes and the restriction sequence."""

import pytest

from dglm.core.derivations import (
    Derivation,
    adjoint,
    boundary_preimage,
    build_der,
    build_f_der,
    build_rel_der,
    build_vanishing_der,
    evaluation_map,
    restriction_ses,
    verify_adjoint,
)
from dglm.core.exactlin import homology, verify_chain_map
from dglm.errors import DegreeRangeExceeded, InvalidModel, NotAFreeExtension, NotASubcomplex
from dglm.models import cp_inclusion


def test_derivation_arithmetic(ab):
    a = ab.generator("a")
    theta = Derivation(1, {"a": ab.bracket(a, a)})
    assert not (theta - theta)
    assert theta + theta == 2 * theta
    assert Derivation(3, {}) == Derivation(1, {})
    with pytest.raises(ValueError):
        theta + Derivation(0, {"b": ab.generator("b")})


def test_der_range_and_dimensions(ab):
    der = build_der(ab)
    assert (der.lo, der.hi) == (-2, 4)
    assert der.dim(2) == 2
    with pytest.raises(DegreeRangeExceeded):
        build_der(ab, cutoff=10)


def test_adjoint_values_and_differential(ab, cp2):
    a, b = ab.generator("a"), ab.generator("b")
    ad_a = adjoint(ab, a)
    assert ad_a.values["a"] == ab.bracket(a, a)
    assert ad_a.values["b"] == ab.bracket(a, b)
    assert verify_adjoint(build_der(ab), b)
    assert verify_adjoint(build_der(cp2), cp2.generator("x1"))


def test_ad_a_is_a_boundary_in_full_derivations(ab):
    der = build_der(ab)
    ad_a = adjoint(ab, ab.generator("a"))
    g = boundary_preimage(der, ad_a)
    assert g is not None
    assert der.differential(g) == ad_a


def test_ad_a_is_a_cycle_but_not_a_boundary_once_a_square_is_fixed(ab):
    a = ab.generator("a")
    vanishing = build_vanishing_der(ab, [ab.bracket(a, a)])
    ad_a = adjoint(ab, a)
    assert vanishing.contains(ad_a)
    assert not vanishing.differential(ad_a)
    assert boundary_preimage(vanishing, ad_a) is None
    assert vanishing.labels(1)[0] == "v0000"


def test_vanishing_conditions_must_be_stable_under_d(ab):
    with pytest.raises(NotASubcomplex):
        build_vanishing_der(ab, [ab.generator("b")])


def test_relative_derivations_need_a_free_extension(disk2):
    with pytest.raises(NotAFreeExtension):
        build_rel_der(disk2)


def test_relative_derivations_of_a_disk_are_acyclic(disk1):
    rel = build_rel_der(disk1)
    assert rel.free == ["v"]
    dims = homology(rel.chain_complex, -1, 4).dims()
    assert dims == {n: 0 for n in range(-1, 5)}


def test_relative_derivations_of_cp_inclusion_are_a_shifted_copy(cp1_cp2):
    rel = build_rel_der(cp1_cp2)
    target = cp1_cp2.target
    assert (rel.lo, rel.hi) == (-3, 3)
    assert list(rel.labels(-1)) == ["x2:[x1,x1]"]
    for n in range(-2, 4):
        assert rel.dim(n) == target.dim(n + 3)

    ev = evaluation_map(rel, "x2")
    assert ev.shift == 3
    assert verify_chain_map(ev, rel.chain_complex, target.chain_complex)
    assert homology(rel.chain_complex, 1, 2).dims() == {1: 1, 2: 0}


def test_evaluation_map_rejects_fixed_generators(cp1_cp2):
    with pytest.raises(KeyError):
        evaluation_map(build_rel_der(cp1_cp2), "x1")


def test_f_derivations_have_no_bracket(cp1_cp2):
    fder = build_f_der(cp1_cp2)
    assert not fder.has_bracket
    assert (fder.lo, fder.hi) == (-1, 5)
    theta = fder.basis(1)[0]
    with pytest.raises(InvalidModel):
        fder.bracket(theta, theta)


def test_restriction_sequence_is_exact(cp1_cp2):
    report = restriction_ses(cp1_cp2)
    assert report.ok
    assert [d.degree for d in report.degrees] == [1, 2, 3]
    first = report.degrees[0]
    assert (first.dim_relative, first.dim_full, first.dim_restricted) == (1, 2, 1)
    assert all(d.dim_relative + d.dim_restricted == d.dim_full for d in report.degrees)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_relative_derivations_of_cp_inclusions_shift_by_the_new_generator(k):
    i = cp_inclusion(k, k + 1).build_map(12)
    rel = build_rel_der(i)
    target = i.target
    top = f"x{k + 1}"
    shift = target.gen_degree[top]
    assert shift == 2 * k + 1
    assert rel.free == [top]
    for n in range(rel.lo + 1, rel.hi + 1):
        assert rel.dim(n) == target.dim(n + shift)
    ev = evaluation_map(rel, top)
    assert ev.shift == shift
    assert verify_chain_map(ev, rel.chain_complex, target.chain_complex)
