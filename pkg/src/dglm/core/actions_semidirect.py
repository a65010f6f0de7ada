"""Outer actions, semidirect products and the relative model.

An outer action ``(α, ξ)`` of ``g`` on ``L`` is a degree 0 map
``x ⊗ a ↦ x.a`` together with a degree -1 map ``ξ: g -> L``. It gives the
twisted semidirect product ``g ⋉_ξ L`` and, equivalently, a dg Lie map
``g -> Der(L)<1> ⋉^ad sL``.
"""

from __future__ import annotations

from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass
from itertools import product
from typing import Any, Generic, TypeVar

from dglm.config import SUITE_SAMPLE_LIMIT, VARIANT_SAMPLE_LIMIT
from dglm.core.ce_convolution import (
    ConvElement,
    ConvolutionDgLie,
    TwistingMorphism,
    pushforward_tau,
    sdeg,
    tau_from_inclusion,
    twist,
)
from dglm.core.derivations import (
    Derivation,
    DerivationComplex,
    adjoint,
    build_der,
    build_f_der,
    build_rel_der,
)
from dglm.core.dglie import (
    ConnectedCover,
    DgLieAlgebra,
    SuiteResult,
    Twisted,
    check_dg_lie,
    graded_map,
    sign,
)
from dglm.core.exactlin import (
    GradedLinearMap,
    HomologyReport,
    InducedMap,
    Rational,
    Sampler,
    Vector,
    Verdict,
    Witness,
    homology,
    induced_map_on_homology,
    mapping_cone,
    vec_add,
    vec_sub,
    verify_chain_map,
)
from dglm.core.gla_free import LieElement, LieMorphism
from dglm.errors import AxiomViolation, DegreeRangeExceeded, NotAChainMap, NotInSpan
from dglm.utils.logging import get_logger

logger = get_logger(__name__)

G = TypeVar("G")
H = TypeVar("H")


@dataclass(frozen=True, eq=False)
class Pair(Generic[G, H]):
    """Element ``(x, a)`` of a product, both components homogeneous of ``degree``."""

    degree: int
    first: G
    second: H

    def __add__(self, other: Pair[G, H]) -> Pair[G, H]:
        return Pair(self.degree if self else other.degree, self.first + other.first, self.second + other.second)  # type: ignore[operator]

    def __sub__(self, other: Pair[G, H]) -> Pair[G, H]:
        return Pair(self.degree if self else other.degree, self.first - other.first, self.second - other.second)  # type: ignore[operator]

    def __neg__(self) -> Pair[G, H]:
        return Pair(self.degree, -self.first, -self.second)  # type: ignore[operator]

    def __rmul__(self, c: Any) -> Pair[G, H]:
        return Pair(self.degree, c * self.first, c * self.second)

    def __bool__(self) -> bool:
        return bool(self.first) or bool(self.second)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Pair):
            return NotImplemented
        return not (self - other)

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        return f"({self.first}, {self.second})"


# --------------------------------------------------------------------------- #
# Outer actions
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class OuterAction:
    """``x.a = act(x, a)`` (degree 0) and ``xi`` (degree -1)."""

    g: DgLieAlgebra[Any]
    L: DgLieAlgebra[Any]
    act: Callable[[Any, Any], Any]
    xi: Callable[[Any], Any]
    name: str = "α"

    def theta(self, x: Any) -> Callable[[Any], Any]:
        return lambda a: self.act(x, a)


def canonical_action(der: DerivationComplex, *, connected: bool = True) -> OuterAction:
    """``Der(L)<1>`` (or all of ``Der(L)``) acting on ``L`` by evaluation, with ``xi = 0``."""
    g: DgLieAlgebra[Derivation] = ConnectedCover(der, 1) if connected else der
    L = der.target
    return OuterAction(g, L, der.evaluate, lambda theta: L.zero(theta.degree - 1), name="ev")


def _labelled(g: DgLieAlgebra[Any], n: int) -> list[tuple[str, Any]]:
    if not g.lo <= n <= g.hi:
        return []
    return list(zip(g.labels(n), g.basis(n)))


def _nonzero_degrees(g: DgLieAlgebra[Any]) -> list[int]:
    return [n for n in range(g.lo, g.hi + 1) if g.dim(n)]


def _fails(lhs: Any, rhs: Any) -> bool:
    return bool(lhs - rhs)


def check_outer_axioms(action: OuterAction, *, limit: int | None = SUITE_SAMPLE_LIMIT) -> list[SuiteResult]:
    """Axioms (I)–(V) on basis pairs and triples inside the known degrees."""
    g, L = action.g, action.L
    gd, ld = _nonzero_degrees(g), _nonzero_degrees(L)
    results: list[SuiteResult] = []

    def run(name: str, cases: Iterator[tuple[int, str, bool]]) -> None:
        sampler = Sampler(limit)
        for degree, where, bad in sampler.take(cases):
            if bad:
                results.append(SuiteResult(name, sampler.count, Witness(f"outer action {name}", degree, where)))
                return
        results.append(SuiteResult(name, sampler.count, None, sampler.truncated))

    def axiom_1() -> Iterator[tuple[int, str, bool]]:
        for m, n, k in product(gd, gd, ld):
            if m + n > g.hi or m + n + k > L.hi:
                continue
            for (lx, x), (ly, y), (la, a) in product(_labelled(g, m), _labelled(g, n), _labelled(L, k)):
                lhs = action.act(g.bracket(x, y), a)
                rhs = action.act(x, action.act(y, a)) - sign(m * n) * action.act(y, action.act(x, a))
                yield m + n + k, f"({lx},{ly},{la})", _fails(lhs, rhs)

    def axiom_2() -> Iterator[tuple[int, str, bool]]:
        for m, k, j in product(gd, ld, ld):
            if m + k + j > L.hi:
                continue
            for (lx, x), (la, a), (lb, b) in product(_labelled(g, m), _labelled(L, k), _labelled(L, j)):
                lhs = action.act(x, L.bracket(a, b))
                rhs = L.bracket(action.act(x, a), b) + sign(m * k) * L.bracket(a, action.act(x, b))
                yield m + k + j, f"({lx},{la},{lb})", _fails(lhs, rhs)

    def axiom_3() -> Iterator[tuple[int, str, bool]]:
        for m in gd:
            if m - 2 < L.lo or m - 1 < g.lo:
                continue
            for lx, x in _labelled(g, m):
                yield m, lx, _fails(L.differential(action.xi(x)), -action.xi(g.differential(x)))

    def axiom_4() -> Iterator[tuple[int, str, bool]]:
        for m, n in product(gd, gd):
            if m + n > g.hi or m + n - 1 > L.hi:
                continue
            for (lx, x), (ly, y) in product(_labelled(g, m), _labelled(g, n)):
                lhs = action.xi(g.bracket(x, y))
                rhs = -sign(n * (m - 1)) * action.act(y, action.xi(x)) + sign(m) * action.act(x, action.xi(y))
                yield m + n, f"({lx},{ly})", _fails(lhs, rhs)

    def axiom_5() -> Iterator[tuple[int, str, bool]]:
        for m, k in product(gd, ld):
            if m + k > L.hi or m + k - 1 < L.lo or m - 1 < g.lo or k - 1 < L.lo:
                continue
            for (lx, x), (la, a) in product(_labelled(g, m), _labelled(L, k)):
                lhs = L.differential(action.act(x, a))
                rhs = (
                    action.act(g.differential(x), a)
                    + sign(m) * action.act(x, L.differential(a))
                    + L.bracket(action.xi(x), a)
                )
                yield m + k, f"({lx},{la})", _fails(lhs, rhs)

    for name, cases in (
        ("I", axiom_1()),
        ("II", axiom_2()),
        ("III", axiom_3()),
        ("IV", axiom_4()),
        ("V", axiom_5()),
    ):
        run(name, cases)
    return results


def require_outer_action(action: OuterAction, *, limit: int | None = SUITE_SAMPLE_LIMIT) -> None:
    for result in check_outer_axioms(action, limit=limit):
        if result.failed:
            raise AxiomViolation(result.name, result.witness)


# --------------------------------------------------------------------------- #
# Der(L)<1> ⋉^ad sL
# --------------------------------------------------------------------------- #


class DerAdSemidirect(DgLieAlgebra[Pair[Derivation, LieElement]]):
    """
    ``Der(L)<1> ⋉^ad sL``.

    An element of degree ``n`` is ``(theta, sx)`` with ``|theta| = n`` and
    ``x`` in ``L_{n-1}``; the second slot stores ``x`` itself. Labels read
    ``"d:<derivation>"`` and ``"s:<L basis>"``.
    """

    def __init__(self, der: DerivationComplex, *, connected: bool = True, name: str | None = None):
        self.full = der
        self.der: DgLieAlgebra[Derivation] = ConnectedCover(der, 1) if connected else der
        self.L = der.target
        self.lo = self.der.lo
        self.hi = min(self.der.hi, self.L.hi + 1)
        self.name = name or f"{self.der.name}⋉s{self.L.name}"

    def _has_der(self, n: int) -> bool:
        return self.der.lo <= n <= self.der.hi

    def _has_suspension(self, n: int) -> bool:
        return self.L.lo <= n - 1 <= self.L.hi

    def basis(self, n: int) -> Sequence[Pair[Derivation, LieElement]]:
        self.check_degree(n)
        out: list[Pair[Derivation, LieElement]] = []
        if self._has_der(n):
            out.extend(Pair(n, theta, self.L.zero(n - 1)) for theta in self.der.basis(n))
        if self._has_suspension(n):
            out.extend(Pair(n, self.full.zero(n), x) for x in self.L.basis(n - 1))
        return out

    def labels(self, n: int) -> Sequence[str]:
        self.check_degree(n)
        out: list[str] = []
        if self._has_der(n):
            out.extend(f"d:{lab}" for lab in self.der.labels(n))
        if self._has_suspension(n):
            out.extend(f"s:{lab}" for lab in self.L.labels(n - 1))
        return out

    def coordinates(self, p: Pair[Derivation, LieElement]) -> list[Rational]:
        n = p.degree
        self.check_degree(n)
        coords: list[Rational] = []
        if self._has_der(n):
            coords.extend(self.der.coordinates(p.first))
        elif p.first:
            raise NotInSpan(f"{self.name}: no derivations in degree {n}")
        if self._has_suspension(n):
            coords.extend(self.L.coordinates(p.second))
        elif p.second:
            raise NotInSpan(f"{self.name}: no suspended elements in degree {n}")
        return coords

    def degree(self, p: Pair[Derivation, LieElement]) -> int:
        return p.degree

    def zero(self, n: int) -> Pair[Derivation, LieElement]:
        return Pair(n, self.full.zero(n), self.L.zero(n - 1))

    def differential(self, p: Pair[Derivation, LieElement]) -> Pair[Derivation, LieElement]:
        """``∂(theta, sx) = (D theta + ad_x, -s dx)``."""
        n = p.degree
        first = self.der.differential(p.first) if p.first else self.full.zero(n - 1)
        if p.second:
            first = first + adjoint(self.L, p.second)
        second = -self.L.differential(p.second) if p.second else self.L.zero(n - 2)
        return Pair(n - 1, first, second)

    def bracket(self, p: Pair[Derivation, LieElement], r: Pair[Derivation, LieElement]) -> Pair[Derivation, LieElement]:
        """``[(theta, sx), (phi, sy)] = ([theta, phi], (-1)^{|theta|} s theta(y) - (-1)^{|phi||x|} s phi(x))``."""
        m, n = p.degree, r.degree
        theta, x, phi, y = p.first, p.second, r.first, r.second
        first = self.der.bracket(theta, phi) if theta and phi else self.full.zero(m + n)
        second = self.L.zero(m + n - 1)
        if theta and y:
            second = second + sign(m) * self.full.evaluate(theta, y)
        if phi and x:
            second = second - sign(n * (m - 1)) * self.full.evaluate(phi, x)
        return Pair(m + n, first, second)


@dataclass(frozen=True)
class ActionMorphism:
    """``psi(x) = (theta_x, -s xi(x))`` for an outer action on a free ``L``."""

    action: OuterAction
    target: DerAdSemidirect

    def __call__(self, x: Any) -> Pair[Derivation, LieElement]:
        L = self.target.L
        n = self.action.g.degree(x)
        values = {g: self.action.act(x, L.generator(g)) for g in L.generators.names}
        return Pair(n, Derivation(n, values), -self.action.xi(x))

    def verify(self, *, limit: int | None = SUITE_SAMPLE_LIMIT) -> Verdict:
        """``psi`` lands in the product and commutes with differentials and brackets."""
        g, h = self.action.g, self.target
        top = min(g.hi, h.hi)
        degrees = [n for n in _nonzero_degrees(g) if n <= top]
        for n in degrees:
            for lab, x in _labelled(g, n):
                image = self(x)
                try:
                    h.coordinates(image)
                except NotInSpan as exc:
                    return Verdict(False, Witness("psi lands in the product", n, lab, str(exc)))
                if n - 1 >= max(g.lo, h.lo) and self(g.differential(x)) != h.differential(image):
                    return Verdict(False, Witness("psi∘d = ∂∘psi", n, lab))
        return preserves_brackets(g, h, self, limit=limit)


def action_to_morphism(
    action: OuterAction,
    der: DerivationComplex,
    *,
    connected: bool = True,
    limit: int | None = SUITE_SAMPLE_LIMIT,
) -> ActionMorphism:
    """
    The dg Lie map ``g -> Der(L)<1> ⋉^ad sL`` equivalent to an outer action.

    Raises:
        AxiomViolation: when the action fails (I)–(V) or the resulting map
            is not a dg Lie morphism.
    """
    require_outer_action(action, limit=limit)
    psi = ActionMorphism(action, DerAdSemidirect(der, connected=connected))
    verdict = psi.verify(limit=limit)
    if not verdict.ok:
        raise AxiomViolation("morphism", verdict.witness)
    logger.info("%s corresponds to a dg Lie map into %s", action.name, psi.target.name)
    return psi


def morphism_to_action(
    psi: Callable[[Any], Pair[Derivation, LieElement]],
    g: DgLieAlgebra[Any],
    target: DerAdSemidirect,
    name: str = "α",
) -> OuterAction:
    """Inverse of :func:`action_to_morphism`: ``x.a = psi(x)_1(a)``, ``xi(x) = -psi(x)_2``."""
    return OuterAction(
        g,
        target.L,
        lambda x, a: target.full.evaluate(psi(x).first, a),
        lambda x: -psi(x).second,
        name=name,
    )


def check_round_trip(action: OuterAction, psi: ActionMorphism, *, limit: int | None = SUITE_SAMPLE_LIMIT) -> Verdict:
    """``morphism_to_action(action_to_morphism(a)) == a`` on basis pairs."""
    back = morphism_to_action(psi, action.g, psi.target, name=action.name)
    g, L = action.g, action.L
    sampler = Sampler(limit)
    for m in _nonzero_degrees(g):
        for lx, x in _labelled(g, m):
            if back.xi(x) != action.xi(x):
                return Verdict(False, Witness("xi round trip", m, lx))
            cases = ((m + k, la, a) for k in _nonzero_degrees(L) if m + k <= L.hi for la, a in _labelled(L, k))
            for degree, la, a in sampler.take(cases):
                if back.act(x, a) != action.act(x, a):
                    return Verdict(False, Witness("action round trip", degree, f"({lx},{la})"))
    return sampler.verdict()


# --------------------------------------------------------------------------- #
# Twisted semidirect products
# --------------------------------------------------------------------------- #


def _one(m: int, n: int) -> int:
    return 1


def _koszul(m: int, n: int) -> int:
    return sign(m * n)


def _anti_koszul(m: int, n: int) -> int:
    return -sign(m * n)


@dataclass(frozen=True)
class BracketVariant:
    """``[(x,a),(y,b)]_2 = [a,b] + left(m,n) x.b - right(m,n) y.a`` with ``m = |x|``, ``n = |y|``."""

    name: str
    left: Callable[[int, int], int]
    right: Callable[[int, int], int]


LITERAL = BracketVariant("literal", _one, _koszul)
BRACKET_VARIANTS: tuple[BracketVariant, ...] = (
    LITERAL,
    BracketVariant("signed-left", _koszul, _one),
    BracketVariant("unsigned", _one, _one),
    BracketVariant("opposite", _one, _anti_koszul),
)


class TwistedSemidirect(DgLieAlgebra[Pair[Any, Any]]):
    """
    ``g ⋉_xi L`` for an outer action: differential ``(dx, da + xi(x))`` and
    bracket ``([x,y], [a,b] + x.b - (-1)^{|y||a|} y.a)``.

    Unless a variant is given, the bracket signs are pinned by running the
    dg Lie suites over :data:`BRACKET_VARIANTS` in order, on at most ``limit``
    basis tuples per degree combination. Labels read
    ``"g:<label>"`` and ``"l:<label>"``.
    """

    def __init__(
        self,
        action: OuterAction,
        *,
        variant: BracketVariant | None = None,
        limit: int | None = VARIANT_SAMPLE_LIMIT,
        name: str | None = None,
    ):
        self.action = action
        self.g = action.g
        self.L = action.L
        self.lo = min(self.g.lo, self.L.lo)
        self.hi = min(self.g.hi, self.L.hi)
        self.name = name or f"{self.g.name}⋉_{action.name}{self.L.name}"
        self.variant = variant if variant is not None else self._pin(limit)

    def _pin(self, limit: int | None) -> BracketVariant:
        last: Witness | None = None
        for candidate in BRACKET_VARIANTS:
            self.variant = candidate
            results = check_dg_lie(self, limit=limit)
            failed = [r for r in results if r.failed]
            if not failed:
                if any(r.truncated for r in results):
                    logger.info("%s: bracket signs pinned on a sample of basis tuples", self.name)
                if candidate is not LITERAL:
                    logger.warning("%s: bracket signs pinned to the %r variant", self.name, candidate.name)
                else:
                    logger.debug("%s: literal bracket passes the dg Lie suites", self.name)
                return candidate
            last = failed[0].witness
            logger.debug("%s: variant %r fails %s", self.name, candidate.name, last)
        raise AxiomViolation("twisted bracket", last)

    def _in_g(self, n: int) -> bool:
        return self.g.lo <= n <= self.g.hi

    def _in_l(self, n: int) -> bool:
        return self.L.lo <= n <= self.L.hi

    def basis(self, n: int) -> Sequence[Pair[Any, Any]]:
        self.check_degree(n)
        out: list[Pair[Any, Any]] = []
        if self._in_g(n):
            out.extend(Pair(n, x, self.L.zero(n)) for x in self.g.basis(n))
        if self._in_l(n):
            out.extend(Pair(n, self.g.zero(n), a) for a in self.L.basis(n))
        return out

    def labels(self, n: int) -> Sequence[str]:
        self.check_degree(n)
        out: list[str] = []
        if self._in_g(n):
            out.extend(f"g:{lab}" for lab in self.g.labels(n))
        if self._in_l(n):
            out.extend(f"l:{lab}" for lab in self.L.labels(n))
        return out

    def coordinates(self, p: Pair[Any, Any]) -> list[Rational]:
        n = p.degree
        self.check_degree(n)
        coords: list[Rational] = []
        for present, part, alg in ((self._in_g(n), p.first, self.g), (self._in_l(n), p.second, self.L)):
            if present:
                coords.extend(alg.coordinates(part))
            elif part:
                raise NotInSpan(f"{self.name}: {alg.name} has nothing in degree {n}")
        return coords

    def degree(self, p: Pair[Any, Any]) -> int:
        return p.degree

    def zero(self, n: int) -> Pair[Any, Any]:
        return Pair(n, self.g.zero(n), self.L.zero(n))

    def differential(self, p: Pair[Any, Any]) -> Pair[Any, Any]:
        n = p.degree
        x, a = p.first, p.second
        dx = self.g.differential(x) if x else self.g.zero(n - 1)
        da = self.L.differential(a) if a else self.L.zero(n - 1)
        if x:
            da = da + self.action.xi(x)
        return Pair(n - 1, dx, da)

    def bracket(self, p: Pair[Any, Any], r: Pair[Any, Any]) -> Pair[Any, Any]:
        m, n = p.degree, r.degree
        x, a, y, b = p.first, p.second, r.first, r.second
        first = self.g.bracket(x, y) if x and y else self.g.zero(m + n)
        second = self.L.bracket(a, b) if a and b else self.L.zero(m + n)
        if x and b:
            second = second + self.variant.left(m, n) * self.action.act(x, b)
        if y and a:
            second = second - self.variant.right(m, n) * self.action.act(y, a)
        return Pair(m + n, first, second)


def induced_hom_action(
    action: OuterAction,
    conv: ConvolutionDgLie[Any],
    *,
    verify: bool = True,
    limit: int | None = SUITE_SAMPLE_LIMIT,
) -> OuterAction:
    """
    The action of ``g`` on ``Hom(C, L)``: ``(x.f)(c) = x.f(c)`` and
    ``xi~(x)(c) = eps(c) xi(x)``, which vanishes on a reduced coalgebra.

    Raises:
        AxiomViolation: when ``verify`` is set and (I)–(V) fail on ``Hom(C, L)``.
    """
    g = action.g
    ce = conv.coalgebra

    def act(x: Any, f: ConvElement[Any]) -> ConvElement[Any]:
        values = {w: action.act(x, v) for w, v in f.values.items()}
        return ConvElement(g.degree(x) + f.degree, values)

    def xi(x: Any) -> ConvElement[Any]:
        n = g.degree(x) - 1
        if ce.lo > 0 or not ce.words(0):
            return ConvElement(n, {})
        value = action.xi(x)
        return ConvElement(n, {w: ce.counit(w) * value for w in ce.words(0) if ce.counit(w)})

    induced = OuterAction(g, conv, act, xi, name=f"{action.name}_*")
    if verify:
        require_outer_action(induced, limit=limit)
    return induced


# --------------------------------------------------------------------------- #
# The relative model
# --------------------------------------------------------------------------- #


def postcompose(der: DerivationComplex) -> Callable[[Derivation, ConvElement[Any]], ConvElement[Any]]:
    """``(theta, f) ↦ theta∘f`` for derivations of the target of ``f``."""

    def act(theta: Derivation, f: ConvElement[Any]) -> ConvElement[Any]:
        values = {w: der.evaluate(theta, v) for w, v in f.values.items()}
        return ConvElement(theta.degree + f.degree, values)

    return act


@dataclass(frozen=True)
class RelativeModel:
    """``Der(L_X)<1> ⋉_{tau_*} Hom^tau(C̄(L_A), L_X)<0>`` for a free extension ``i``."""

    inclusion: LieMorphism
    der: DerivationComplex
    tau: TwistingMorphism[Any]
    hom: Twisted[ConvElement[Any]]
    action: OuterAction
    algebra: TwistedSemidirect
    twist_check: Verdict

    @property
    def conv(self) -> ConvolutionDgLie[Any]:
        return self.tau.algebra

    @property
    def lo(self) -> int:
        return self.algebra.lo

    @property
    def hi(self) -> int:
        return self.algebra.hi

    def homology(self, lo: int = 1, hi: int | None = None) -> HomologyReport:
        return homology(self.algebra.chain_complex, lo, self.hi - 1 if hi is None else hi)


def check_twist_identity(
    der: DerivationComplex,
    tau: TwistingMorphism[Any],
    variant: BracketVariant,
    *,
    lo: int | None = None,
    hi: int | None = None,
    limit: int | None = SUITE_SAMPLE_LIMIT,
) -> Verdict:
    """
    Twisting ``Der(L_X) ⋉ Hom(C̄(L_A), L_X)`` (with ``xi = 0``) by ``(0, tau)``
    gives ``Der(L_X) ⋉_{tau_*} Hom^tau``: same differential, same bracket.
    """
    conv = tau.algebra
    untwisted = TwistedSemidirect(
        OuterAction(der, conv, postcompose(der), lambda theta: conv.zero(theta.degree - 1), name="∘"),
        variant=variant,
    )
    twisted = Twisted(untwisted, Pair(-1, der.zero(-1), tau.element), name=f"{untwisted.name}^(0,τ)")
    hom = twist(conv, tau)
    direct = TwistedSemidirect(
        OuterAction(der, hom, postcompose(der), lambda theta: pushforward_tau(der, theta, tau), name="τ_*"),
        variant=variant,
    )
    first = max(direct.lo, twisted.lo) if lo is None else lo
    last = min(direct.hi, twisted.hi) if hi is None else hi
    sampler = Sampler(limit)
    for n in range(first, last + 1):
        elements = list(zip(direct.labels(n), direct.basis(n)))
        for lab, p in elements:
            if n - 1 >= first and direct.differential(p) != twisted.differential(p):
                return Verdict(False, Witness("∂^(0,τ) = ∂^{τ_*}", n, lab))
        for m in range(first, last + 1):
            if m + n > last:
                break
            for (lp, p), (lr, r) in sampler.take(product(elements, zip(direct.labels(m), direct.basis(m)))):
                if direct.bracket(p, r) != twisted.bracket(p, r):
                    return Verdict(False, Witness("same bracket", m + n, f"({lp},{lr})"))
    return sampler.verdict()


def build_relative_model(
    i: LieMorphism,
    word_cutoff: int | None = None,
    *,
    der_cutoff: int | None = None,
    limit: int | None = SUITE_SAMPLE_LIMIT,
    variant_limit: int | None = VARIANT_SAMPLE_LIMIT,
) -> RelativeModel:
    """
    Assemble the relative model of a free extension ``i: L_A -> L_X``.

    Raises:
        NotAFreeExtension: ``i`` is not a free map.
        MCViolation: ``tau = i∘pi_A`` fails the Maurer–Cartan equation.
        AxiomViolation: the twist identity or the product's dg Lie laws fail.
    """
    i.complement()
    tau = tau_from_inclusion(i, word_cutoff)
    der = build_der(i.target, der_cutoff)
    hom = twist(tau.algebra, tau)
    action = OuterAction(
        ConnectedCover(der, 1),
        ConnectedCover(hom, 0),
        postcompose(der),
        lambda theta: pushforward_tau(der, theta, tau),
        name="τ_*",
    )
    algebra = TwistedSemidirect(action, limit=variant_limit, name=f"{der.name}<1>⋉_τ*{hom.name}<0>")
    verdict = check_twist_identity(der, tau, algebra.variant, lo=max(algebra.lo, 0), hi=algebra.hi, limit=limit)
    if not verdict.ok:
        raise AxiomViolation("twist identity", verdict.witness)
    logger.info(
        "relative model of %s: degrees [%d, %d], word cutoff %d",
        i.name,
        algebra.lo,
        algebra.hi,
        tau.algebra.coalgebra.hi,
    )
    return RelativeModel(i, der, tau, hom, action, algebra, verdict)


# --------------------------------------------------------------------------- #
# Comparison maps
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class ComparisonReport:
    """Chain-map verdict, optional bracket verdict and the induced map on homology."""

    name: str
    chain_map: GradedLinearMap
    brackets: Verdict | None
    induced: InducedMap
    lo: int
    hi: int

    @property
    def ok(self) -> bool:
        return (self.brackets is None or bool(self.brackets)) and self.induced.is_quasi_isomorphism


def _compare(
    name: str,
    f: GradedLinearMap,
    src: DgLieAlgebra[Any],
    tgt: DgLieAlgebra[Any],
    lo: int,
    hi: int | None,
    brackets: Verdict | None,
) -> ComparisonReport:
    source, target = src.chain_complex, tgt.chain_complex
    verdict = verify_chain_map(f, source, target)
    if not verdict:
        raise NotAChainMap(f"{name} is not a chain map", verdict.witness)
    top = min(f.hi, source.hi, target.hi - f.shift) - 1
    last = top if hi is None else hi
    if last > top:
        raise DegreeRangeExceeded(name, last, lo, top)
    induced = induced_map_on_homology(f, source, target, lo, last)
    logger.info("%s: quasi-isomorphism on [%d, %d]: %s", name, lo, last, induced.is_quasi_isomorphism)
    return ComparisonReport(name, f, brackets, induced, lo, last)


def preserves_brackets(
    source: DgLieAlgebra[Any],
    target: DgLieAlgebra[Any],
    fn: Callable[[Any], Any],
    *,
    limit: int | None = SUITE_SAMPLE_LIMIT,
) -> Verdict:
    """``fn[x, y] = [fn x, fn y]`` on basis pairs whose bracket stays in range."""
    top = min(source.hi, target.hi)
    degrees = _nonzero_degrees(source)
    pairs = (
        (m + n, lx, x, ly, y)
        for m, n in product(degrees, degrees)
        if m + n <= top
        for (lx, x), (ly, y) in product(_labelled(source, m), _labelled(source, n))
    )
    sampler = Sampler(limit)
    for degree, lx, x, ly, y in sampler.take(pairs):
        if fn(source.bracket(x, y)) != target.bracket(fn(x), fn(y)):
            return Verdict(False, Witness("f[x,y] = [f x, f y]", degree, f"({lx},{ly})"))
    return sampler.verdict()


def zeta(model: RelativeModel, *, hi: int | None = None, limit: int | None = SUITE_SAMPLE_LIMIT) -> ComparisonReport:
    """``theta ↦ (theta, 0)`` from ``Der(L_X‖L_A)<1>`` into the relative model."""
    rel = ConnectedCover(build_rel_der(model.inclusion, model.der.hi), 1)
    target = model.algebra

    def embed(theta: Derivation) -> Pair[Derivation, ConvElement[Any]]:
        return Pair(theta.degree, theta, model.hom.zero(theta.degree))

    f = graded_map(rel, target, embed, shift=0, lo=0, hi=min(rel.hi, target.hi), name="ζ")
    brackets = preserves_brackets(rel, target, embed, limit=limit)
    return _compare("ζ", f, rel, target, 1, hi, brackets)


def pi_star(fder: DerivationComplex, tau: TwistingMorphism[Any], theta: Derivation) -> ConvElement[Any]:
    """``pi_A^*(theta) = (-1)^{|theta|+1} theta∘pi_A`` for an ``i``-derivation ``theta``."""
    ce = tau.algebra.coalgebra
    s = sign(theta.degree + 1)
    values: dict[Any, Any] = {}
    for sym in ce.symbols:
        if sdeg(sym) > ce.hi:
            continue
        value = fder.evaluate(theta, ce.element(sym))
        if value:
            values[(sym,)] = s * value
    return ConvElement(theta.degree - 1, values)


def s_pi_star(model: RelativeModel, *, hi: int | None = None) -> ComparisonReport:
    """``Der_i(L_A, L_X)<1> -> Hom^tau<0>``, lowering degree by one."""
    i = model.inclusion
    fder = build_f_der(i)
    source = ConnectedCover(fder, 1)
    target = ConnectedCover(model.hom, 0)
    f = graded_map(
        source,
        target,
        lambda theta: pi_star(fder, model.tau, theta),
        shift=-1,
        lo=0,
        hi=min(source.hi, target.hi + 1),
        name="sπ*",
    )
    return _compare("sπ*", f, source, target, 1, hi, None)


def restrict_along(der: DerivationComplex, i: LieMorphism, theta: Derivation) -> Derivation:
    """``theta∘i`` as an ``i``-derivation of ``L_A``."""
    values = {a: der.evaluate(theta, value) for a, value in i.image_map.items()}
    return Derivation(theta.degree, values)


def cone_homotopy_check(model: RelativeModel) -> Verdict:
    """
    With ``rho`` the projection of the relative model onto ``Der(L_X)<1>``,
    ``H(theta) = (0, s(theta, 0))`` satisfies ``dH + Hd = Psi - Phi`` in
    ``cone(rho)``, where ``Phi(theta) = (theta, 0)`` and
    ``Psi(theta) = (0, -s(0, pi_A^*(theta∘i)))``.
    """
    i = model.inclusion
    product_ = model.algebra
    der1 = product_.g
    rho = graded_map(product_, der1, lambda p: p.first, shift=0, name="ρ")
    src, tgt = product_.chain_complex, der1.chain_complex
    verdict = verify_chain_map(rho, src, tgt)
    if not verdict:
        raise NotAChainMap("ρ is not a chain map", verdict.witness)
    cone = mapping_cone(rho, src, tgt, name="cone(ρ)")
    fder = build_f_der(i)
    hom = model.hom

    def tagged(prefix: str, v: Vector, c: int = 1) -> Vector:
        return {f"{prefix}:{k}": c * x for k, x in v.items()}

    def homotopy(theta: Derivation) -> Vector:
        return tagged("s", product_.vector(Pair(theta.degree, theta, hom.zero(theta.degree))))

    first = max(cone.lo, der1.lo + 1, 1)
    last = cone.hi - 1
    for n in range(first, last + 1):
        for lab, theta in _labelled(der1, n):
            lhs = cone.d(n + 1, homotopy(theta))
            if n - 1 > der1.lo:
                d_theta = der1.differential(theta)
                if d_theta:
                    lhs = vec_add(lhs, homotopy(d_theta))
            pulled = pi_star(fder, model.tau, restrict_along(model.der, i, theta))
            psi = tagged("s", product_.vector(Pair(n - 1, der1.zero(n - 1), pulled)), -1)
            phi = tagged("t", der1.vector(theta))
            rhs = vec_sub(psi, phi)
            diff = vec_sub(lhs, rhs)
            if diff:
                return Verdict(False, Witness("dH + Hd = Ψ - Φ", n, lab, str(sorted(diff))))
    return Verdict(True)
