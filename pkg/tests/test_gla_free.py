"""Tests for free graded Lie algebras and their morphisms."""

import pytest

from dglm.core.dglie import check_antisymmetry, check_dg_lie, sign
from dglm.core.exactlin import homology
from dglm.core.gla_free import (
    FreeGradedLie,
    LieElement,
    LieMorphism,
    graded_commutator,
    indecomposables,
    inclusion,
    lcs_stage,
    nilpotency_index,
    tensor_product,
    truncate,
    verify_morphism,
)
from dglm.errors import DegreeRangeExceeded, InvalidModel, NotAFreeExtension
from dglm.models import cp_model

from .conftest import gen


def test_cp2_basis_dimensions(cp2):
    assert [cp2.dim(n) for n in range(1, 7)] == [1, 1, 1, 1, 1, 2]
    assert list(cp2.labels(2)) == ["[x1,x1]"]


def test_odd_square_is_nonzero_and_even_square_vanishes(cp2, s3):
    x1 = cp2.generator("x1")
    assert cp2.bracket(x1, x1) == 2 * tensor_product(x1, x1)
    u = s3.generator("u")
    assert not s3.bracket(u, u)


def test_graded_antisymmetry(ab):
    a, b = ab.generator("a"), ab.generator("b")
    for x, y in [(a, b), (a, a), (b, ab.bracket(a, b))]:
        assert ab.bracket(x, y) == -sign(x.degree * y.degree) * ab.bracket(y, x)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_sign_law_suites_pass_on_cp_models(k):
    L = cp_model(k).build(8)
    assert all(r.ok for r in check_dg_lie(L))


class MisbracketedLie(FreeGradedLie):
    """Free Lie algebra whose bracket is off on a single ordered pair."""

    bad: tuple[LieElement, LieElement] | None = None

    def bracket(self, x: LieElement, y: LieElement) -> LieElement:
        out = super().bracket(x, y)
        if self.bad is not None and (x, y) == self.bad:
            return out + self.basis(x.degree + y.degree)[0]
        return out


@pytest.fixture
def misbracketed() -> MisbracketedLie:
    L = MisbracketedLie({"a": 1, "b": 1, "c": 1}, {}, 5, name="abc")
    L.bad = (L.basis(1)[-1], L.basis(4)[-1])
    return L


def test_error_on_the_last_basis_pair_is_found(misbracketed):
    L = misbracketed
    result = check_antisymmetry(L)
    assert result.failed
    assert result.witness.degree == 5
    assert result.witness.element == f"[{L.labels(1)[-1]},{L.labels(4)[-1]}]"
    assert not all(r.ok for r in check_dg_lie(L))


def test_capped_suite_is_truncated_not_passed(misbracketed):
    capped = check_antisymmetry(misbracketed, limit=5)
    assert capped.truncated
    assert not capped.failed
    assert not capped.ok
    assert capped.checked < check_antisymmetry(FreeGradedLie({"a": 1, "b": 1, "c": 1}, {}, 5)).checked


def test_sign_law_suites_pass_on_ab(ab):
    results = check_dg_lie(ab)
    assert [r.name for r in results] == ["dsquare", "antisymmetry", "jacobi", "leibniz"]
    assert all(r.ok for r in results)


def test_cp2_homology(cp2):
    h = homology(cp2.chain_complex, 1, 7)
    assert h.dims() == {1: 1, 2: 0, 3: 0, 4: 1, 5: 0, 6: 0, 7: 0}


def test_sphere_homology(s3):
    assert homology(s3.chain_complex, 1, 7).dims() == {1: 0, 2: 1, 3: 0, 4: 0, 5: 0, 6: 0, 7: 0}


def test_differential_must_square_to_zero():
    with pytest.raises(InvalidModel, match="d∘d"):
        FreeGradedLie({"a": 1, "b": 2, "c": 3}, {"b": gen("a", 1), "c": gen("b", 2)}, 6)


def test_differential_must_be_a_lie_element():
    with pytest.raises(InvalidModel, match="not a Lie element"):
        FreeGradedLie({"a": 2, "c": 5}, {"c": tensor_product(gen("a", 2), gen("a", 2))}, 6)


def test_invalid_generators_rejected():
    with pytest.raises(InvalidModel):
        FreeGradedLie({"a": 0}, {}, 4)
    with pytest.raises(InvalidModel):
        FreeGradedLie({"a": 1}, {"z": gen("a", 1)}, 4)
    with pytest.raises(InvalidModel):
        FreeGradedLie({"a": 3}, {}, 2)


def test_bracket_beyond_cutoff_is_refused(cp2):
    x2 = cp2.generator("x2")
    square = cp2.bracket(x2, x2)
    assert square.degree == 6
    with pytest.raises(DegreeRangeExceeded):
        cp2.bracket(square, x2)
    with pytest.raises(DegreeRangeExceeded):
        cp2.basis(9)


def test_differential_beyond_cutoff_is_refused(cp2):
    x1, x2 = cp2.generator("x1"), cp2.generator("x2")
    high = graded_commutator(cp2.bracket(x2, x2), cp2.bracket(x1, x2))
    assert high.degree == 10
    with pytest.raises(DegreeRangeExceeded):
        cp2.apply_d(high)
    assert not cp2.apply_d(cp2.zero(10))
    assert cp2.apply_d(x2) == cp2.d_of("x2")


def test_indecomposables_keep_linear_part(cp2, ab):
    q_cp2 = indecomposables(cp2)
    assert q_cp2.dim(1) == 1 and q_cp2.dim(3) == 1
    assert homology(q_cp2, 1, 4).dims() == {1: 1, 2: 0, 3: 1, 4: 0}
    assert homology(indecomposables(ab), 1, 3).dims() == {1: 0, 2: 0, 3: 0}


def test_truncation_and_lower_central_series(cp2):
    cover = truncate(cp2, 2)
    assert (cover.lo, cover.hi) == (1, 8)
    assert [cover.dim(n) for n in (1, 2, 3)] == [0, 1, 1]
    assert list(cover.labels(2)) == ["z0000"]
    assert truncate(cp2.chain_complex, 2).dim(2) == 1
    gamma = lcs_stage(cp2, 1)
    assert [len(gamma[n]) for n in range(1, 5)] == [0, 1, 0, 1]
    assert len(lcs_stage(cp2, 0)[3]) == 1
    with pytest.raises(ValueError):
        lcs_stage(cp2, -1)


def test_nilpotency_index(cp2):
    assert nilpotency_index(cp2, 1) == 1
    assert nilpotency_index(cp2, 2) == 2


def test_free_and_non_free_maps(disk1, disk2):
    assert disk1.is_free_extension
    assert disk1.complement() == ["v"]
    assert verify_morphism(disk2)
    assert not disk2.is_free_extension
    with pytest.raises(NotAFreeExtension, match="cofibrant"):
        disk2.complement()


def test_morphism_must_commute_with_d(ab):
    A = FreeGradedLie({"u": 2}, {}, 6, name="A")
    bad = LieMorphism(A, ab, {"u": ab.generator("b")})
    verdict = verify_morphism(bad)
    assert not verdict
    assert verdict.witness.check == "f∘d = d∘f"


def test_inclusion_by_name(cp1, cp2):
    i = inclusion(cp1, cp2)
    assert i(cp1.generator("x1")) == cp2.generator("x1")
    assert i.complement() == ["x2"]
    assert verify_morphism(i)
