"""Tests for Maurer–Cartan elements, BCH products and gauge actions.

``Der(L(a, b))`` with ``db = a`` is small enough to work out by hand: its
degree -1 part is spanned by ``P = (b ↦ a)``, every degree -1 element is
Maurer–Cartan, and the degree 0 cycles are spanned by the Euler derivation
``E`` and ``F = (b ↦ [a, a])`` with ``[E, F] = F``.
"""

from itertools import islice

import pytest

from dglm.core.actions_semidirect import OuterAction
from dglm.core.ce_convolution import tau_from_inclusion
from dglm.core.derivations import Derivation, build_der
from dglm.core.exactlin import cycles, q
from dglm.core.mc_gauge import (
    GroupElement,
    MCElement,
    bch,
    check_action_property,
    check_orbit_symmetry,
    dynkin_terms,
    find_gauge_parameter,
    gauge_act,
    gauge_orbits,
    group_element,
    inverse,
    is_mc,
    mc_solutions,
    nilpotency_class,
)
from dglm.errors import NilpotencyBoundExceeded, NotACycle, NotMaurerCartan


@pytest.fixture
def der(ab):
    return build_der(ab)


@pytest.fixture
def parts(ab):
    a, b = ab.generator("a"), ab.generator("b")
    return {
        "P": Derivation(-1, {"b": a}),
        "E": Derivation(0, {"a": a, "b": b}),
        "F": Derivation(0, {"b": ab.bracket(a, a)}),
    }


@pytest.fixture
def shifted(der):
    """Trivial action with the linear ``xi(x) = (b ↦ x(a))``."""
    return OuterAction(
        der,
        der,
        lambda x, y: der.zero(x.degree + y.degree),
        lambda x: Derivation(-1, {"b": x.value("a", 1)}),
        name="shift",
    )


def test_mc_points_of_derivations(der, parts):
    assert is_mc(der, parts["P"])
    points = mc_solutions(der)
    assert [p.element for p in points] == [-parts["P"], der.zero(-1), parts["P"]]
    with pytest.raises(NotMaurerCartan):
        is_mc(der, parts["E"])


def test_group_elements_are_degree_zero_cycles(ab, der, parts):
    assert group_element(der, parts["E"]).element == parts["E"]
    with pytest.raises(NotACycle):
        GroupElement(der, Derivation(0, {"a": ab.generator("a")}))
    with pytest.raises(NotACycle):
        GroupElement(der, parts["P"])


def test_dynkin_order_two_is_half_the_bracket(der, parts):
    E, F = parts["E"], parts["F"]
    assert der.bracket(E, F) == F
    assert dynkin_terms(der, E, F, 2) == q(1, 2) * F


def test_bch_of_commuting_elements_adds(der, parts):
    F = group_element(der, parts["F"])
    assert nilpotency_class(der, F.element, F.element) == 1
    assert bch(F, F).element == 2 * parts["F"]
    assert not bch(F, inverse(F)).element


def test_bch_refuses_non_nilpotent_pairs(der, parts):
    E, F = group_element(der, parts["E"]), group_element(der, parts["F"])
    with pytest.raises(NilpotencyBoundExceeded):
        bch(E, F)
    with pytest.raises(NilpotencyBoundExceeded):
        bch(F, F, class_bound=7)


def test_internal_gauge_fixes_p(der, parts):
    P = MCElement(der, parts["P"])
    for name in ("E", "F"):
        assert gauge_act(group_element(der, parts[name]), P).element == parts["P"]


def test_outer_gauge_moves_by_xi(der, parts, shifted):
    P = MCElement(der, parts["P"])
    E = group_element(der, parts["E"])
    assert gauge_act(E, P, shifted).element == der.zero(-1)
    assert find_gauge_parameter(E, P, MCElement(der, der.zero(-1)), shifted) == 1
    assert find_gauge_parameter(E, P, MCElement(der, 2 * parts["P"]), shifted) == -1
    assert find_gauge_parameter(group_element(der, parts["F"]), P, MCElement(der, der.zero(-1)), shifted) is None


def test_orbits_under_outer_gauge(der, parts, shifted):
    points = mc_solutions(der)
    group = [group_element(der, parts["E"])]
    orbits = gauge_orbits(points, group, shifted)
    assert orbits.orbits == [[0, 1, 2]]
    assert orbits.moves == {(1, 0): 0, (2, 0): 1}
    assert check_orbit_symmetry(orbits, group, shifted)


def test_orbits_under_internal_gauge_are_points(der, parts):
    points = mc_solutions(der)
    group = [group_element(der, parts["E"]), group_element(der, parts["F"])]
    orbits = gauge_orbits(points, group)
    assert orbits.orbits == [[0], [1], [2]]
    assert orbits.orbit_of(2) == [2]
    assert check_orbit_symmetry(orbits, group)


def test_gauge_in_a_convolution_algebra(cp1_cp2):
    tau = tau_from_inclusion(cp1_cp2)
    conv = tau.algebra
    keys = [conv.vector(p.element) for p in mc_solutions(conv)]
    assert conv.vector(tau.element) in keys
    assert {} in keys
    with pytest.raises(NotMaurerCartan):
        MCElement(conv, 2 * tau.element)

    a = MCElement(conv, tau.element)
    group = [group_element(conv, conv.from_vector(0, z)) for z in cycles(conv.chain_complex, 0)]
    group.append(group_element(conv, conv.zero(0)))
    for x in group:
        for y in group:
            assert check_action_property(x, y, a)


def test_gauge_laws_on_fifty_convolution_fixtures(cp1_cp2):
    conv = tau_from_inclusion(cp1_cp2).algebra
    zero = MCElement(conv, conv.zero(-1))
    points = mc_solutions(conv)
    scales = [q(1), q(-1), q(2), q(1, 2), q(-3, 2)]
    group = [group_element(conv, c * conv.from_vector(0, z)) for z in cycles(conv.chain_complex, 0) for c in scales]
    fixtures = list(islice(((x, y, a) for x in group for y in group for a in points), 50))
    assert len(fixtures) == 50
    for x, y, a in fixtures:
        assert is_mc(conv, gauge_act(x, a).element)
        assert not gauge_act(x, zero).element
        assert check_action_property(x, y, a, class_bound=4)
