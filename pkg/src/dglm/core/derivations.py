"""Derivation complexes of free dg Lie algebras.

A derivation is stored by its values on generators; everything else
(evaluation, the differential ``D`` and the commutator bracket) is derived
from those values through the Leibniz rule.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Any

from dglm.core.dglie import DgLieAlgebra, sign
from dglm.core.exactlin import (
    ONE,
    GradedLinearMap,
    Rational,
    SpanBasis,
    Vector,
    Verdict,
    Witness,
    rank,
    solve,
    sparse_kernel,
    verify_chain_map,
)
from dglm.core.gla_free import FreeGradedLie, LieElement, LieMorphism, extend_derivation
from dglm.errors import (
    DegreeRangeExceeded,
    InvalidModel,
    NotAChainMap,
    NotASubcomplex,
    NotInSpan,
)
from dglm.utils.logging import get_logger

logger = get_logger(__name__)


class DerivationKind(str, Enum):
    FULL = "full"
    RELATIVE = "relative_free_extension"
    VANISHING = "vanishing_on_elements"
    F_DERIVATIONS = "f_derivations"


@dataclass(frozen=True, eq=False)
class Derivation:
    """Homogeneous derivation given by its (nonzero) values on generators."""

    degree: int
    values: Mapping[str, LieElement] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", {g: v for g, v in self.values.items() if v})

    def _combine(self, other: Derivation, c: int) -> Derivation:
        if not isinstance(other, Derivation):
            return NotImplemented
        if self.values and other.values and self.degree != other.degree:
            raise ValueError(f"cannot add derivations of degrees {self.degree} and {other.degree}")
        n = self.degree if self.values else other.degree
        out = dict(self.values)
        for g, v in other.values.items():
            out[g] = out[g] + c * v if g in out else c * v
        return Derivation(n, out)

    def __add__(self, other: Derivation) -> Derivation:
        return self._combine(other, 1)

    def __sub__(self, other: Derivation) -> Derivation:
        return self._combine(other, -1)

    def __neg__(self) -> Derivation:
        return Derivation(self.degree, {g: -v for g, v in self.values.items()})

    def __rmul__(self, c: Any) -> Derivation:
        return Derivation(self.degree, {g: c * v for g, v in self.values.items()})

    def __bool__(self) -> bool:
        return bool(self.values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return not (self - other)

    __hash__ = None  # type: ignore[assignment]

    def value(self, generator: str, degree: int) -> LieElement:
        return self.values.get(generator, LieElement(degree + self.degree, {}))

    def __str__(self) -> str:
        if not self.values:
            return "0"
        return "; ".join(f"{g} ↦ {v}" for g, v in sorted(self.values.items()))


class DerivationComplex(DgLieAlgebra[Derivation]):
    """
    Derivations ``source -> target`` of one of the four kinds.

    Degree ``n`` is spanned by ``g ↦ b`` for ``g`` a generator carrying
    values and ``b`` a basis element of ``target`` in degree ``|g| + n``;
    labels read ``"g:b"``. The valid range is ``[-m, cutoff - m]`` with ``m``
    the top generator degree of the source. The ``vanishing_on_elements``
    kind keeps the subspace killing the listed elements, labelled
    ``v0000, v0001, ...`` per degree.
    """

    def __init__(
        self,
        kind: DerivationKind,
        source: FreeGradedLie,
        target: FreeGradedLie,
        free: Iterable[str],
        *,
        along: LieMorphism | None = None,
        elements: Sequence[LieElement] = (),
        cutoff: int | None = None,
        name: str = "Der",
    ):
        self.kind = kind
        self.source = source
        self.target = target
        self.free = sorted(free)
        self.along = along
        self.elements = tuple(elements)
        self.name = name
        top = max(source.gen_degree.values(), default=1)
        self.lo = -top
        self.hi = target.cutoff - top
        if cutoff is not None:
            if cutoff > self.hi:
                raise DegreeRangeExceeded(f"{name} (raise the model cutoff)", cutoff, self.lo, self.hi)
            self.hi = cutoff
        if self.hi <= self.lo:
            raise DegreeRangeExceeded(name, self.lo + 1, self.lo, self.hi)
        self._ambient: dict[int, tuple[list[str], list[Derivation]]] = {}
        self._sub: dict[int, tuple[list[Derivation], SpanBasis]] = {}
        if kind is DerivationKind.VANISHING:
            self._verify_closure()
        logger.debug(
            "%s (%s): degrees [%d, %d], dims %s",
            name,
            kind.value,
            self.lo,
            self.hi,
            {n: self.dim(n) for n in range(self.lo, self.hi + 1)},
        )

    @property
    def has_bracket(self) -> bool:
        return self.kind is not DerivationKind.F_DERIVATIONS

    # -- evaluation ---------------------------------------------------------- #

    def evaluate(self, theta: Derivation, x: LieElement) -> LieElement:
        """``theta(x)`` for ``x`` in the source, by the (f-)Leibniz rule."""
        along = self.along.image_map if self.along is not None else None
        return extend_derivation(x, theta.values, theta.degree, self.source.gen_degree, along)

    # -- bases --------------------------------------------------------------- #

    def _ambient_basis(self, n: int) -> tuple[list[str], list[Derivation]]:
        self.check_degree(n)
        cached = self._ambient.get(n)
        if cached is not None:
            return cached
        labels: list[str] = []
        elements: list[Derivation] = []
        for g in self.free:
            m = self.source.gen_degree[g] + n
            if m <= 0:
                continue
            for lab, b in zip(self.target.labels(m), self.target.basis(m)):
                labels.append(f"{g}:{lab}")
                elements.append(Derivation(n, {g: b}))
        self._ambient[n] = (labels, elements)
        return labels, elements

    def _ambient_coordinates(self, theta: Derivation) -> list[Rational]:
        n = theta.degree
        stray = set(theta.values) - set(self.free)
        if stray:
            raise NotInSpan(f"{self.name}: derivation has values on fixed generator {sorted(stray)[0]}")
        coords: list[Rational] = []
        for g in self.free:
            m = self.source.gen_degree[g] + n
            value = theta.value(g, self.source.gen_degree[g])
            if m <= 0:
                if value:
                    raise NotInSpan(f"{self.name}: nonzero value in degree {m}")
                continue
            coords.extend(self.target.coordinates(value))
        return coords

    def _ambient_vector(self, theta: Derivation) -> Vector:
        labels, _ = self._ambient_basis(theta.degree)
        return {lab: c for lab, c in zip(labels, self._ambient_coordinates(theta)) if c}

    def _subspace(self, n: int) -> tuple[list[Derivation], SpanBasis]:
        cached = self._sub.get(n)
        if cached is not None:
            return cached
        labels, ambient = self._ambient_basis(n)
        keys: dict[tuple[int, tuple[str, ...]], int] = {}
        rows: list[dict[int, Rational]] = []
        for j, theta in enumerate(ambient):
            for i, s in enumerate(self.elements):
                for w, c in self.evaluate(theta, s).terms.items():
                    r = keys.setdefault((i, w), len(keys))
                    if r == len(rows):
                        rows.append({})
                    rows[r][j] = c
        kernel = sparse_kernel(rows, len(ambient))
        elements: list[Derivation] = []
        for v in kernel:
            theta = Derivation(n, {})
            for j, c in sorted(v.items()):
                theta = theta + c * ambient[j]
            elements.append(theta)
        span = SpanBasis(
            [{labels[j]: c for j, c in v.items()} for v in kernel], assume_independent=True
        )
        self._sub[n] = (elements, span)
        return elements, span

    def basis(self, n: int) -> Sequence[Derivation]:
        if self.kind is DerivationKind.VANISHING:
            self.check_degree(n)
            return self._subspace(n)[0]
        return self._ambient_basis(n)[1]

    def labels(self, n: int) -> Sequence[str]:
        if self.kind is DerivationKind.VANISHING:
            self.check_degree(n)
            return [f"v{i:04d}" for i in range(len(self._subspace(n)[0]))]
        return self._ambient_basis(n)[0]

    def coordinates(self, theta: Derivation) -> list[Rational]:
        self.check_degree(theta.degree)
        if self.kind is DerivationKind.VANISHING:
            _, span = self._subspace(theta.degree)
            return span.coordinates(self._ambient_vector(theta))
        return self._ambient_coordinates(theta)

    def contains(self, theta: Derivation) -> bool:
        try:
            self.coordinates(theta)
        except NotInSpan:
            return False
        return True

    def degree(self, theta: Derivation) -> int:
        return theta.degree

    def zero(self, n: int) -> Derivation:
        return Derivation(n, {})

    # -- dg Lie structure ---------------------------------------------------- #

    def differential(self, theta: Derivation) -> Derivation:
        """``D(theta) = d∘theta - (-1)^{|theta|} theta∘d`` on the free generators."""
        n = theta.degree
        out: dict[str, LieElement] = {}
        for g in self.free:
            dg = self.source.gen_degree[g]
            value = self.target.apply_d(theta.value(g, dg))
            value = value - sign(n) * self.evaluate(theta, self.source.d_of(g))
            out[g] = value
        return Derivation(n - 1, out)

    def bracket(self, theta: Derivation, phi: Derivation) -> Derivation:
        """``[theta, phi] = theta∘phi - (-1)^{|theta||phi|} phi∘theta``."""
        if not self.has_bracket:
            raise InvalidModel("f-derivations carry no Lie bracket")
        n = theta.degree + phi.degree
        if n > self.hi and theta and phi:
            raise DegreeRangeExceeded(f"bracket in {self.name}", n, self.lo, self.hi)
        s = sign(theta.degree * phi.degree)
        out: dict[str, LieElement] = {}
        for g in self.free:
            dg = self.source.gen_degree[g]
            out[g] = self.evaluate(theta, phi.value(g, dg)) - s * self.evaluate(phi, theta.value(g, dg))
        return Derivation(n, out)

    def _verify_closure(self) -> None:
        for n in range(self.lo + 1, self.hi + 1):
            for i, theta in enumerate(self.basis(n)):
                if not self.contains(self.differential(theta)):
                    raise NotASubcomplex(
                        f"{self.name} is not closed under D",
                        Witness("D-closure", n, f"v{i:04d}", str(theta)),
                    )
        degrees = [n for n in range(self.lo, self.hi + 1) if self.basis(n)]
        pairs = (
            (m, k, x, y)
            for m, k in product(degrees, repeat=2)
            if self.lo <= m + k <= self.hi
            for x, y in product(self.basis(m), self.basis(k))
        )
        for m, k, x, y in pairs:
            if not self.contains(self.bracket(x, y)):
                raise NotASubcomplex(
                    f"{self.name} is not closed under the bracket",
                    Witness("bracket closure", m + k, f"[{x}, {y}]"),
                )


# --------------------------------------------------------------------------- #
# Builders
# --------------------------------------------------------------------------- #


def build_der(L: FreeGradedLie, cutoff: int | None = None) -> DerivationComplex:
    """The dg Lie algebra ``Der(L)`` of all derivations."""
    return DerivationComplex(
        DerivationKind.FULL, L, L, L.generators.names, cutoff=cutoff, name=f"Der({L.name})"
    )


def build_rel_der(i: LieMorphism, cutoff: int | None = None) -> DerivationComplex:
    """
    ``Der(L_X‖L_A)``: derivations of the target vanishing on the image of ``i``.

    Raises:
        NotAFreeExtension: when ``i`` does not send generators to distinct
            generators, so the image is not a free factor.
    """
    free = i.complement()
    return DerivationComplex(
        DerivationKind.RELATIVE,
        i.target,
        i.target,
        free,
        cutoff=cutoff,
        name=f"Der({i.target.name}‖{i.source.name})",
    )


def build_vanishing_der(
    L: FreeGradedLie, elements: Sequence[LieElement], cutoff: int | None = None
) -> DerivationComplex:
    """Derivations of ``L`` annihilating each of ``elements``."""
    shown = ", ".join(str(e) for e in elements) or "∅"
    return DerivationComplex(
        DerivationKind.VANISHING,
        L,
        L,
        L.generators.names,
        elements=elements,
        cutoff=cutoff,
        name=f"Der({L.name}‖{shown})",
    )


def build_f_der(i: LieMorphism, cutoff: int | None = None) -> DerivationComplex:
    """``Der_i(L_A, L_X)``: i-derivations, a chain complex without bracket."""
    return DerivationComplex(
        DerivationKind.F_DERIVATIONS,
        i.source,
        i.target,
        i.source.generators.names,
        along=i,
        cutoff=cutoff,
        name=f"Der_{i.name}({i.source.name},{i.target.name})",
    )


def adjoint(L: FreeGradedLie, x: LieElement) -> Derivation:
    """``ad_x = [x, -]`` as a derivation of degree ``|x|``."""
    top = max(L.gen_degree.values(), default=0)
    if x.degree + top > L.cutoff and x:
        raise DegreeRangeExceeded(f"ad in {L.name}", x.degree, 0, L.cutoff - top)
    return Derivation(x.degree, {g: L.bracket(x, L.generator(g)) for g in L.generators.names})


def verify_adjoint(der: DerivationComplex, x: LieElement) -> Verdict:
    """``D(ad_x) = ad_{dx}``."""
    L = der.target
    lhs = der.differential(adjoint(L, x))
    rhs = adjoint(L, L.apply_d(x))
    if lhs != rhs:
        return Verdict(False, Witness("D(ad_x) = ad_dx", x.degree, str(x), str(lhs - rhs)))
    return Verdict(True)


def boundary_preimage(der: DerivationComplex, theta: Derivation) -> Derivation | None:
    """Some ``g`` with ``D g = theta``, or None when ``theta`` is not a boundary."""
    n = theta.degree + 1
    der.check_degree(n)
    columns = [der.vector(der.differential(b)) for b in der.basis(n)]
    coeffs = solve(columns, der.vector(theta))
    if coeffs is None:
        return None
    return der.combination(n, coeffs)


def evaluation_map(der: DerivationComplex, generator: str) -> GradedLinearMap:
    """
    ``theta ↦ theta(generator)`` from ``der`` into the target's chain complex.

    For a relative complex with a single free generator this is the
    identification of ``Der`` with a shifted copy of the target.
    """
    if generator not in der.free:
        raise KeyError(f"{generator} carries no values in {der.name}")
    shift = der.source.gen_degree[generator]
    target = der.target.chain_complex
    lo = max(der.lo, target.lo - shift)
    hi = min(der.hi, target.hi - shift)
    images: dict[int, dict[str, Vector]] = {}
    for n in range(lo, hi + 1):
        images[n] = {
            lab: der.target.vector(b.value(generator, shift)) if n + shift > 0 else {}
            for lab, b in zip(der.labels(n), der.basis(n))
        }
    return GradedLinearMap(
        der.chain_complex.space, target.space, shift, images, lo, hi, sign=1, name=f"ev_{generator}"
    )


# --------------------------------------------------------------------------- #
# Restriction short exact sequence
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class SesDegree:
    degree: int
    dim_relative: int
    dim_full: int
    dim_restricted: int
    exact: bool


@dataclass(frozen=True)
class SesReport:
    """Per-degree exactness of ``0 -> Der(X‖A) -> Der(X) -> Der_i(A, X) -> 0``."""

    inclusion: GradedLinearMap
    restriction: GradedLinearMap
    degrees: tuple[SesDegree, ...]
    witness: Witness | None = None

    @property
    def ok(self) -> bool:
        return self.witness is None


def _label_matrix_rank(columns: Sequence[Vector]) -> int:
    keys = sorted({k for c in columns for k in c})
    index = {k: i for i, k in enumerate(keys)}
    return rank([{index[k]: x for k, x in c.items()} for c in columns], len(keys))


def restriction_ses(
    i: LieMorphism, cutoff: int | None = None, *, lo: int = 1
) -> SesReport:
    """
    Build inclusion and restriction maps and check exactness degree by degree.

    Exactness is checked through ranks: the inclusion is injective, the
    restriction surjective, the composite zero and the dimensions add up.
    """
    rel = build_rel_der(i, cutoff)
    full = build_der(i.target, cutoff)
    fder = build_f_der(i, cutoff)
    gmap = i.generator_map() or {}
    back = {x: a for a, x in gmap.items()}
    first, last = max(lo, full.lo), min(rel.hi, full.hi, fder.hi)
    incl_images: dict[int, dict[str, Vector]] = {}
    res_images: dict[int, dict[str, Vector]] = {}
    for n in range(full.lo, last + 1):
        incl_images[n] = {lab: {lab: ONE} for lab in rel.labels(n)} if n >= rel.lo else {}
        table: dict[str, Vector] = {}
        for lab in full.labels(n):
            g, _, rest = lab.partition(":")
            table[lab] = {f"{back[g]}:{rest}": ONE} if g in back else {}
        res_images[n] = table
    inclusion = GradedLinearMap(
        rel.chain_complex.space, full.chain_complex.space, 0, incl_images,
        max(full.lo, rel.lo), last, sign=1, name="incl",
    )
    restriction = GradedLinearMap(
        full.chain_complex.space, fder.chain_complex.space, 0, res_images,
        max(full.lo, fder.lo), last, sign=1, name="res",
    )
    for f, src, tgt in ((inclusion, rel, full), (restriction, full, fder)):
        verdict = verify_chain_map(f, src.chain_complex, tgt.chain_complex)
        if not verdict:
            raise NotAChainMap(f"{f.name} does not commute with D", verdict.witness)
    degrees: list[SesDegree] = []
    witness: Witness | None = None
    for n in range(first, last + 1):
        a, b, c = rel.dim(n), full.dim(n), fder.dim(n)
        inj = _label_matrix_rank(inclusion.columns(n)) == a
        surj = _label_matrix_rank(restriction.columns(n)) == c
        composite = all(
            not restriction.apply(n, col) for col in inclusion.columns(n)
        )
        exact = inj and surj and composite and a + c == b
        degrees.append(SesDegree(n, a, b, c, exact))
        if not exact and witness is None:
            witness = Witness("exactness", n, "Der(X‖A) -> Der(X) -> Der_i(A,X)", f"dims {a}, {b}, {c}")
    logger.debug("restriction sequence %s", [(d.degree, d.exact) for d in degrees])
    return SesReport(inclusion, restriction, tuple(degrees), witness)
