"""Free graded Lie algebras with a differential, realised inside tensor algebras.

An element is a homogeneous noncommutative polynomial (word -> rational);
the bracket is the graded commutator, so the Lie algebra generated by the
generators is exactly the free graded Lie algebra. A per-degree basis of
nested bracket monomials is extracted greedily and used for coordinates.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from dglm.core.dglie import ConnectedCover, DgLieAlgebra, sign
from dglm.core.exactlin import (
    ONE,
    ChainComplex,
    Rational,
    SpanBasis,
    Verdict,
    Witness,
    connected_cover,
    format_rational,
    independent_indices,
    q,
    vec_axpy,
)
from dglm.errors import DegreeRangeExceeded, InvalidModel, NotAFreeExtension, NotInSpan
from dglm.utils.logging import get_logger

logger = get_logger(__name__)

Word = tuple[str, ...]

GENERATOR_NAME = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


@dataclass(frozen=True, eq=False)
class LieElement:
    """Homogeneous element of a tensor algebra, stored as ``{word: coeff}``."""

    degree: int
    terms: Mapping[Word, Rational] = field(default_factory=dict)

    def _check(self, other: LieElement) -> int:
        if not isinstance(other, LieElement):
            return NotImplemented  # type: ignore[return-value]
        if other.degree != self.degree and self.terms and other.terms:
            raise ValueError(f"cannot add elements of degrees {self.degree} and {other.degree}")
        return self.degree if self.terms else other.degree

    def __add__(self, other: LieElement) -> LieElement:
        n = self._check(other)
        out = dict(self.terms)
        vec_axpy(out, ONE, other.terms)
        return LieElement(n, out)

    def __sub__(self, other: LieElement) -> LieElement:
        n = self._check(other)
        out = dict(self.terms)
        vec_axpy(out, -ONE, other.terms)
        return LieElement(n, out)

    def __neg__(self) -> LieElement:
        return LieElement(self.degree, {w: -c for w, c in self.terms.items()})

    def __rmul__(self, c: Any) -> LieElement:
        c = q(c) if isinstance(c, (int, str)) else c
        if not c:
            return LieElement(self.degree, {})
        return LieElement(self.degree, {w: c * x for w, x in self.terms.items()})

    __mul__ = __rmul__

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieElement):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return self.degree == other.degree and dict(self.terms) == dict(other.terms)

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"LieElement({self.degree}, {format_element(self)!r})"


def format_element(x: LieElement) -> str:
    if not x.terms:
        return "0"
    parts = []
    for w, c in sorted(x.terms.items()):
        word = "⊗".join(w)
        parts.append(word if c == ONE else f"{format_rational(c)}*{word}")
    return " + ".join(parts)


def tensor_product(x: LieElement, y: LieElement) -> LieElement:
    out: dict[Word, Rational] = {}
    for u, a in x.terms.items():
        for v, b in y.terms.items():
            vec_axpy(out, a * b, {u + v: ONE})
    return LieElement(x.degree + y.degree, out)


def graded_commutator(x: LieElement, y: LieElement) -> LieElement:
    """``xy - (-1)^{|x||y|} yx``."""
    out = dict(tensor_product(x, y).terms)
    vec_axpy(out, -sign(x.degree * y.degree), tensor_product(y, x).terms)
    return LieElement(x.degree + y.degree, out)


def word_degree(word: Iterable[str], degrees: Mapping[str, int]) -> int:
    return sum(degrees[g] for g in word)


def extend_derivation(
    x: LieElement,
    values: Mapping[str, LieElement],
    degree: int,
    degrees: Mapping[str, int],
    along: Mapping[str, LieElement] | None = None,
) -> LieElement:
    """
    Extend generator values to a derivation on words.

    ``theta(w1...wk) = sum_i (-1)^{degree * |w1...w_{i-1}|} f(w1)..theta(wi)..f(wk)``
    where ``f`` is the identity, or the algebra map given by ``along``.
    """
    out: dict[Word, Rational] = {}
    for w, c in x.terms.items():
        prefix_degree = 0
        for i, g in enumerate(w):
            value = values.get(g)
            if value is not None and value.terms:
                s = sign(degree * prefix_degree)
                if along is None:
                    head, tail = w[:i], w[i + 1 :]
                    for u, a in value.terms.items():
                        vec_axpy(out, s * c * a, {head + u + tail: ONE})
                else:
                    piece = LieElement(0, {(): ONE})
                    for h in w[:i]:
                        piece = tensor_product(piece, along[h])
                    piece = tensor_product(piece, value)
                    for h in w[i + 1 :]:
                        piece = tensor_product(piece, along[h])
                    vec_axpy(out, s * c, piece.terms)
            prefix_degree += degrees[g]
    return LieElement(x.degree + degree, out)


def extend_morphism(
    x: LieElement, images: Mapping[str, LieElement], degrees: Mapping[str, int]
) -> LieElement:
    """Multiplicative extension of generator images to words."""
    out: dict[Word, Rational] = {}
    for w, c in x.terms.items():
        piece = LieElement(0, {(): ONE})
        for g in w:
            piece = tensor_product(piece, images[g])
            if not piece.terms:
                break
        vec_axpy(out, c, piece.terms)
    return LieElement(x.degree, out)


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered, named generators with positive degrees."""

    items: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for name, deg in self.items:
            if not GENERATOR_NAME.match(name):
                raise InvalidModel(f"invalid generator name {name!r}")
            if name in seen:
                raise InvalidModel(f"duplicate generator {name!r}")
            if deg < 1:
                raise InvalidModel(f"generator {name} has degree {deg}; degrees must be >= 1")
            seen.add(name)

    @classmethod
    def of(cls, items: Mapping[str, int] | Sequence[tuple[str, int]]) -> GeneratorSet:
        pairs = items.items() if isinstance(items, Mapping) else items
        return cls(tuple((str(n), int(d)) for n, d in pairs))

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.items]

    @property
    def degrees(self) -> dict[str, int]:
        return dict(self.items)

    def in_degree(self, n: int) -> list[str]:
        return sorted(name for name, d in self.items if d == n)

    def __contains__(self, name: object) -> bool:
        return name in self.degrees

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class _DegreeBasis:
    elements: tuple[LieElement, ...]
    labels: tuple[str, ...]
    lengths: tuple[int, ...]
    span: SpanBasis


class FreeGradedLie(DgLieAlgebra[LieElement]):
    """
    ``(L(V), d)`` on degrees ``[0, cutoff]``.

    The differential is given on generators; at construction each ``d(g)``
    is checked to be a Lie element of degree ``|g| - 1`` and ``d(d(g)) = 0``.
    """

    def __init__(
        self,
        generators: GeneratorSet | Mapping[str, int] | Sequence[tuple[str, int]],
        differential: Mapping[str, LieElement] | None = None,
        cutoff: int = 10,
        *,
        name: str = "L",
    ):
        self.generators = (
            generators if isinstance(generators, GeneratorSet) else GeneratorSet.of(generators)
        )
        self.gen_degree = self.generators.degrees
        top = max(self.gen_degree.values(), default=0)
        if cutoff < max(top, 1):
            raise InvalidModel(f"cutoff {cutoff} is below the top generator degree {top}")
        self.name = name
        self.lo = 0
        self.hi = cutoff
        self.cutoff = cutoff
        self._bases: dict[int, _DegreeBasis] = {}
        self._d: dict[str, LieElement] = {}
        for g, value in (differential or {}).items():
            if g not in self.generators:
                raise InvalidModel(f"differential given for unknown generator {g!r}")
            if value:
                self._d[g] = value
        self._verify_differential()
        logger.debug("%s: generators %s, cutoff %d", name, self.generators.items, cutoff)

    # -- construction checks ------------------------------------------------ #

    def _verify_differential(self) -> None:
        for g, value in self._d.items():
            expected = self.gen_degree[g] - 1
            if value.degree != expected:
                raise InvalidModel(f"d({g}) has degree {value.degree}, expected {expected}")
            for w in value.terms:
                missing = [h for h in w if h not in self.generators]
                if missing:
                    raise InvalidModel(f"d({g}) uses unknown generator {missing[0]!r}")
                if word_degree(w, self.gen_degree) != expected:
                    raise InvalidModel(f"d({g}) is not homogeneous of degree {expected}")
            if expected < 1 or not self._in_lie_span(value):
                raise InvalidModel(f"d({g}) = {value} is not a Lie element")
        for g in self._d:
            dd = self.apply_d(self._d[g])
            if dd:
                raise InvalidModel(f"d∘d({g}) = {dd} is not zero")

    def _in_lie_span(self, x: LieElement) -> bool:
        try:
            self.coordinates(x)
        except NotInSpan:
            return False
        return True

    # -- elements ------------------------------------------------------------ #

    def generator(self, name: str) -> LieElement:
        if name not in self.generators:
            raise KeyError(f"{self.name} has no generator {name!r}")
        return LieElement(self.gen_degree[name], {(name,): ONE})

    def d_of(self, name: str) -> LieElement:
        return self._d.get(name, LieElement(self.gen_degree[name] - 1, {}))

    def zero(self, n: int) -> LieElement:
        return LieElement(n, {})

    def degree(self, x: LieElement) -> int:
        return x.degree

    def apply_d(self, x: LieElement) -> LieElement:
        if x and not self.lo <= x.degree <= self.hi:
            raise DegreeRangeExceeded(f"differential in {self.name}", x.degree, self.lo, self.hi)
        return extend_derivation(x, self._d, -1, self.gen_degree)

    def differential(self, x: LieElement) -> LieElement:
        return self.apply_d(x)

    def bracket(self, x: LieElement, y: LieElement) -> LieElement:
        n = x.degree + y.degree
        if n > self.cutoff and x and y:
            raise DegreeRangeExceeded(f"bracket in {self.name}", n, self.lo, self.hi)
        return graded_commutator(x, y)

    # -- bases --------------------------------------------------------------- #

    def _degree_basis(self, n: int) -> _DegreeBasis:
        """
        Left-normed brackets ``[g,y]`` with ``y`` in the basis of degree ``n - |g|``,
        ordered by word length and then by label, keeping the first independent ones.
        """
        self.check_degree(n)
        cached = self._bases.get(n)
        if cached is not None:
            return cached
        # candidates: (length, label, element)
        cands: list[tuple[int, str, LieElement]] = []
        for g in self.generators.in_degree(n):
            cands.append((1, g, self.generator(g)))
        for g, dg in self.generators.items:
            if dg >= n:
                continue
            inner = self._degree_basis(n - dg)
            gen = self.generator(g)
            for lab, length, y in zip(inner.labels, inner.lengths, inner.elements):
                z = graded_commutator(gen, y)
                if z:
                    cands.append((length + 1, f"[{g},{lab}]", z))
        cands.sort(key=lambda t: t[:2])
        picked = independent_indices([c[2].terms for c in cands])
        chosen = [cands[i] for i in picked]
        basis = _DegreeBasis(
            tuple(c[2] for c in chosen),
            tuple(c[1] for c in chosen),
            tuple(c[0] for c in chosen),
            SpanBasis([c[2].terms for c in chosen], assume_independent=True),
        )
        self._bases[n] = basis
        logger.debug("%s: dim L_%d = %d", self.name, n, len(chosen))
        return basis

    def lie_basis(self, n: int) -> list[LieElement]:
        """Basis of the degree ``n`` part of the free Lie algebra."""
        if n <= 0:
            self.check_degree(max(n, self.lo))
            return []
        return list(self._degree_basis(n).elements)

    def basis(self, n: int) -> Sequence[LieElement]:
        return self.lie_basis(n)

    def labels(self, n: int) -> Sequence[str]:
        if n <= 0:
            self.check_degree(max(n, self.lo))
            return []
        return self._degree_basis(n).labels

    def bracket_length(self, n: int) -> tuple[int, ...]:
        return self._degree_basis(n).lengths if n > 0 else ()

    def coordinates(self, x: LieElement) -> list[Rational]:
        n = x.degree
        if n <= 0:
            if x:
                raise NotInSpan(f"{self.name} is zero in degree {n}")
            return []
        return self._degree_basis(n).span.coordinates(x.terms)

    def contains(self, x: LieElement) -> bool:
        """Whether a tensor element lies in the Lie subalgebra."""
        if x.degree > self.cutoff:
            raise DegreeRangeExceeded(self.name, x.degree, self.lo, self.hi)
        return self._in_lie_span(x)

    def with_cutoff(self, cutoff: int) -> FreeGradedLie:
        return FreeGradedLie(self.generators, self._d, cutoff, name=self.name)


# --------------------------------------------------------------------------- #
# Derived constructions
# --------------------------------------------------------------------------- #


def truncate(obj: ChainComplex | DgLieAlgebra[Any], n: int) -> Any:
    """``n``-connected cover of a chain complex or of a dg Lie algebra."""
    if isinstance(obj, ChainComplex):
        return connected_cover(obj, n).complex
    return ConnectedCover(obj, n)


def indecomposables(L: FreeGradedLie) -> ChainComplex:
    """
    ``L / [L, L]`` with the induced differential.

    Decomposables are exactly the words of length at least two, so the
    quotient is spanned by the generators and ``d`` keeps its linear part.
    """
    bases = {n: L.generators.in_degree(n) for n in range(L.lo, L.hi + 1)}
    images: dict[int, dict[str, dict[str, Rational]]] = {}
    for n in range(L.lo + 1, L.hi + 1):
        table: dict[str, dict[str, Rational]] = {}
        for g in bases[n]:
            linear = {w[0]: c for w, c in L.d_of(g).terms.items() if len(w) == 1}
            table[g] = linear
        images[n] = table
    return ChainComplex.build(bases, images, L.lo, L.hi, f"Q({L.name})")


def lcs_stage(L: FreeGradedLie, k: int) -> dict[int, list[LieElement]]:
    """
    Per-degree basis of the lower central series term ``Γ^k L``.

    ``Γ^0 = L`` and ``Γ^{k+1} = [Γ^k, L]``; in a free Lie algebra this is the
    span of brackets of at least ``k + 1`` generators.
    """
    if k < 0:
        raise ValueError("lower central series index must be >= 0")
    out: dict[int, list[LieElement]] = {}
    for n in range(1, L.hi + 1):
        out[n] = [
            x for x, length in zip(L.lie_basis(n), L.bracket_length(n)) if length >= k + 1
        ]
    return out


def nilpotency_index(L: FreeGradedLie, n: int) -> int:
    """Smallest ``k`` with ``(Γ^k L)_n = 0``."""
    lengths = L.bracket_length(n)
    return max(lengths, default=0)


# --------------------------------------------------------------------------- #
# Morphisms
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class LieMorphism:
    """Morphism of free dg Lie algebras given by generator images."""

    source: FreeGradedLie
    target: FreeGradedLie
    images: Mapping[str, LieElement]
    name: str = "i"

    def __call__(self, x: LieElement) -> LieElement:
        return extend_morphism(x, self.image_map, self.source.gen_degree)

    @property
    def image_map(self) -> dict[str, LieElement]:
        return {
            g: self.images.get(g, LieElement(d, {})) for g, d in self.source.gen_degree.items()
        }

    def generator_map(self) -> dict[str, str] | None:
        """Source generator -> target generator when the map is a free inclusion."""
        out: dict[str, str] = {}
        for g, value in self.image_map.items():
            terms = dict(value.terms)
            if len(terms) != 1:
                return None
            ((w, c),) = terms.items()
            if len(w) != 1 or c != ONE or w[0] not in self.target.generators:
                return None
            if self.target.gen_degree[w[0]] != self.source.gen_degree[g]:
                return None
            out[g] = w[0]
        if len(set(out.values())) != len(out):
            return None
        return out

    @property
    def is_free_extension(self) -> bool:
        return self.generator_map() is not None

    def complement(self) -> list[str]:
        """Target generators outside the image; raises NotAFreeExtension."""
        gmap = self.generator_map()
        if gmap is None:
            raise NotAFreeExtension(f"{self.name}: {self.source.name} -> {self.target.name} is not a free map")
        hit = set(gmap.values())
        return [g for g in self.target.generators.names if g not in hit]


def verify_morphism(f: LieMorphism) -> Verdict:
    """Check degrees, Lie membership of images and ``f d = d f`` on generators."""
    for g, value in f.image_map.items():
        deg = f.source.gen_degree[g]
        if value and value.degree != deg:
            return Verdict(False, Witness("degree preservation", deg, g, f"image has degree {value.degree}"))
        if value and not f.target.contains(value):
            return Verdict(False, Witness("Lie membership", deg, g, str(value)))
        lhs = f(f.source.d_of(g))
        rhs = f.target.apply_d(value)
        if lhs - rhs:
            return Verdict(False, Witness("f∘d = d∘f", deg, g, f"difference {lhs - rhs}"))
    return Verdict(True)


def is_free_extension(f: LieMorphism) -> bool:
    return f.is_free_extension


def identity_morphism(L: FreeGradedLie) -> LieMorphism:
    return LieMorphism(L, L, {g: L.generator(g) for g in L.generators.names}, name=f"id[{L.name}]")


def inclusion(source: FreeGradedLie, target: FreeGradedLie, name: str = "i") -> LieMorphism:
    """The map sending each generator to the target generator of the same name."""
    images = {}
    for g in source.generators.names:
        if g not in target.generators:
            raise NotAFreeExtension(f"{target.name} has no generator named {g!r}")
        images[g] = target.generator(g)
    return LieMorphism(source, target, images, name)
