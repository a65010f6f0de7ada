"""Tests for Chevalley–Eilenberg coalgebras and convolution algebras."""

import pytest

from dglm.core.ce_convolution import (
    CECoalgebra,
    ConvElement,
    Coderivation,
    build_ce,
    build_convolution,
    check_coalgebra,
    check_coderivation,
    check_filtration_brackets,
    default_word_cutoff,
    filtration_stage,
    indecomposables_comparison,
    normalize,
    pushforward_tau,
    tau_from_inclusion,
    twist,
    universal_twisting,
    word_label,
)
from dglm.core.derivations import Derivation, build_der
from dglm.core.dglie import check_d_squared, mc_residual
from dglm.core.exactlin import homology
from dglm.core.gla_free import indecomposables
from dglm.errors import DegreeRangeExceeded, NotInSpan
from dglm.models import sphere_model


def test_normal_form_signs():
    u, v = (2, "u"), (2, "v")
    assert normalize((v, u)) == (-1, (u, v))
    assert normalize((u, u)) == (0, ())
    x = (1, "x1")
    assert normalize((x, x)) == (1, (x, x))


def test_words_of_the_cp1_coalgebra(cp1):
    ce = build_ce(cp1)
    assert (ce.lo, ce.hi) == (0, 7)
    assert ce.labels(2) == ["sx1"]
    assert ce.labels(3) == ["s[x1,x1]"]
    assert ce.labels(4) == ["sx1^sx1"]
    assert word_label(()) == "1"


def test_unreduced_coalgebra_has_the_empty_word(cp1):
    ce = CECoalgebra(cp1, 4, reduced=False)
    assert ce.words(0) == [()]
    assert ce.counit(()) == 1
    cop = ce.coproduct(((1, "x1"),))
    assert set(cop) == {((), ((1, "x1"),)), (((1, "x1"),), ())}


def test_coalgebra_needs_a_connected_algebra_known_far_enough(cp1):
    with pytest.raises(DegreeRangeExceeded):
        CECoalgebra(cp1, 9)


def test_coalgebra_laws(cp1, cp2):
    for L, top in ((cp1, 7), (cp2, 6)):
        results = check_coalgebra(build_ce(L, top))
        assert [r.name for r in results] == ["cocommutativity", "coassociativity", "codifferential"]
        assert all(r.ok for r in results)


def test_ce_homology_is_reduced_homology_of_the_space(cp1, s3):
    dims = homology(build_ce(cp1).chain_complex, 1, 6).dims()
    assert dims == {1: 0, 2: 1, 3: 0, 4: 0, 5: 0, 6: 0}
    dims = homology(build_ce(s3).chain_complex, 1, 8).dims()
    assert dims == {n: 1 if n == 3 else 0 for n in range(1, 9)}


def test_indecomposables_comparison_is_a_quasi_isomorphism(cp2):
    induced = indecomposables_comparison(cp2, 2, 7)
    assert induced.shift == -1
    assert induced.is_quasi_isomorphism
    assert induced.matrices[2] and induced.matrices[4]


def test_default_word_cutoff(cp1, cp2, s3):
    assert default_word_cutoff(cp2, s3) == 3
    assert default_word_cutoff(cp2, cp1) == 5
    assert default_word_cutoff(cp2) == 5


def test_convolution_range_and_labels(disk2):
    conv = build_convolution(disk2.source, disk2.target)
    assert (conv.lo, conv.hi) == (-3, 3)
    assert conv.coalgebra.labels(3) == ["su"]
    assert list(conv.labels(-2)) == ["su|a"]


def test_maps_outside_the_truncation_are_rejected(disk2):
    conv = build_convolution(disk2.source, disk2.target)
    X = disk2.target
    a, b = X.generator("a"), X.generator("b")
    with pytest.raises(DegreeRangeExceeded):
        conv.coordinates(ConvElement(-4, {((2, "u"), (2, "u")): b}))
    with pytest.raises(NotInSpan):
        conv.coordinates(ConvElement(-1, {((1, "x"),): X.bracket(a, a)}))


def test_universal_twisting_is_maurer_cartan(cp1):
    pi = universal_twisting(cp1)
    x1 = cp1.generator("x1")
    assert pi(((1, "x1"),)) == x1
    assert not pi(((1, "x1"), (1, "x1")))
    assert not mc_residual(pi.algebra, pi.element)


def test_tau_from_inclusion_sends_su_to_the_square(disk2):
    tau = tau_from_inclusion(disk2)
    a = disk2.target.generator("a")
    assert tau(((2, "u"),)) == disk2.target.bracket(a, a)
    twisted = twist(tau.algebra, tau)
    assert check_d_squared(twisted).ok


def test_adjoint_coderivation(cp1):
    ce = build_ce(cp1, 6)
    x1 = cp1.generator("x1")
    theta = Coderivation(ce, lambda y: cp1.bracket(x1, y), x1.degree)
    image = theta(((1, "x1"),))
    assert image == {((2, "[x1,x1]"),): -1}
    results = check_coderivation(theta)
    assert [r.name for r in results] == ["coderivation-pi", "coderivation-coproduct"]
    assert all(r.ok for r in results)


def test_filtration_is_compatible_with_brackets(cp1):
    conv = universal_twisting(cp1).algebra
    f1, f2 = filtration_stage(conv, 1), filtration_stage(conv, 2)
    for n in range(conv.lo, conv.hi + 1):
        assert len(f2.vectors[n]) <= len(f1.vectors[n])
    assert check_filtration_brackets(conv, 1, 2).ok


def test_pushforward_composes_a_derivation_with_tau(cp1_cp2):
    tau = tau_from_inclusion(cp1_cp2)
    X = cp1_cp2.target
    theta = Derivation(2, {"x1": X.generator("x2")})
    image = pushforward_tau(build_der(X), theta, tau)
    assert image.degree == 1
    assert image.values == {((1, "x1"),): -X.generator("x2")}


@pytest.mark.parametrize("n", [4, 5])
def test_ce_homology_is_shifted_indecomposable_homology_for_spheres(n):
    L = sphere_model(n).build(10)
    ce_dims = homology(build_ce(L).chain_complex, 2, 9).dims()
    q_dims = homology(indecomposables(L), 1, 8).dims()
    assert [ce_dims[p + 1] for p in range(1, 9)] == [q_dims[p] for p in range(1, 9)]
    assert q_dims[n - 2] == 1
    assert indecomposables_comparison(L, 2, 9).is_quasi_isomorphism
