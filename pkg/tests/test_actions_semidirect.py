"""Tests for outer actions, twisted semidirect products and the relative model."""

import pytest

from dglm.core.actions_semidirect import (
    LITERAL,
    OuterAction,
    Pair,
    TwistedSemidirect,
    action_to_morphism,
    build_relative_model,
    canonical_action,
    check_outer_axioms,
    check_round_trip,
    cone_homotopy_check,
    induced_hom_action,
    require_outer_action,
    s_pi_star,
    zeta,
)
from dglm.core.ce_convolution import build_convolution
from dglm.core.derivations import build_der
from dglm.core.dglie import check_dg_lie
from dglm.errors import AxiomViolation, NotAFreeExtension
from dglm.models import cp_inclusion, disk_pairs


@pytest.fixture
def cp_relative(cp1_cp2):
    return build_relative_model(cp1_cp2)


def test_pair_arithmetic(ab):
    a, b = ab.generator("a"), ab.generator("b")
    p = Pair(1, a, ab.zero(1))
    r = Pair(1, ab.zero(1), a)
    assert p + r == Pair(1, a, a)
    assert not (p - p)
    assert -p == Pair(1, -a, ab.zero(1))
    assert 3 * r == Pair(1, ab.zero(1), 3 * a)
    assert str(Pair(2, b, ab.zero(2))) == f"({b}, 0)"


def test_evaluation_is_an_outer_action(ab):
    results = check_outer_axioms(canonical_action(build_der(ab)))
    assert [r.name for r in results] == ["I", "II", "III", "IV", "V"]
    assert all(r.ok for r in results)


def test_broken_xi_is_caught(ab):
    ev = canonical_action(build_der(ab))
    a = ab.generator("a")
    bad = OuterAction(
        ev.g,
        ab,
        ev.act,
        lambda theta: a if theta.degree == 2 and theta else ab.zero(theta.degree - 1),
        name="bad",
    )
    results = {r.name: r for r in check_outer_axioms(bad)}
    assert not results["V"].ok
    assert results["V"].witness.check == "outer action V"
    with pytest.raises(AxiomViolation):
        require_outer_action(bad)


def test_action_and_morphism_correspond(ab):
    der = build_der(ab)
    action = canonical_action(der)
    psi = action_to_morphism(action, der)
    assert psi.target.labels(2)[-1] == "s:a"
    assert check_round_trip(action, psi)


def test_semidirect_product_keeps_literal_signs(ab):
    product = TwistedSemidirect(canonical_action(build_der(ab)))
    assert product.variant is LITERAL
    assert all(r.ok for r in check_dg_lie(product))
    assert product.labels(1)[-1] == "l:a"


def test_action_on_hom_has_no_xi(cp1_cp2):
    der = build_der(cp1_cp2.target)
    conv = build_convolution(cp1_cp2.source, cp1_cp2.target)
    induced = induced_hom_action(canonical_action(der), conv)
    theta = induced.g.basis(1)[0]
    assert not induced.xi(theta)


def test_relative_model_of_cp_inclusion(cp_relative):
    assert cp_relative.twist_check
    assert cp_relative.conv.coalgebra.hi == 4
    assert (cp_relative.lo, cp_relative.hi) == (-1, 2)
    assert cp_relative.homology().dims() == {1: 1}
    assert all(r.ok for r in check_dg_lie(cp_relative.algebra))


def test_relative_derivations_embed_quasi_isomorphically(cp_relative):
    report = zeta(cp_relative)
    assert (report.lo, report.hi) == (1, 1)
    assert report.brackets
    assert report.ok


def test_restricted_derivations_compare_to_twisted_hom(cp_relative):
    report = s_pi_star(cp_relative)
    assert report.chain_map.shift == -1
    assert report.brackets is None
    assert report.induced.is_quasi_isomorphism


def test_cone_homotopy(cp_relative):
    assert cone_homotopy_check(cp_relative)


def test_relative_model_needs_a_free_extension(disk2):
    with pytest.raises(NotAFreeExtension):
        build_relative_model(disk2)


def test_disk_comparisons_through_degree_eight():
    model = build_relative_model(disk_pairs()[0].file.build_map(16))
    for report in (zeta(model, hi=8), s_pi_star(model, hi=8)):
        assert (report.lo, report.hi) == (1, 8)
        assert report.induced.is_quasi_isomorphism
        assert report.ok


def test_cp_inclusion_comparisons_beyond_degree_one():
    model = build_relative_model(cp_inclusion(1, 2).build_map(12))
    for report in (zeta(model), s_pi_star(model)):
        assert report.lo == 1
        assert report.hi >= 3
        assert report.ok
