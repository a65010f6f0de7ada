"""Chevalley–Eilenberg coalgebras and convolution dg Lie algebras.

Words of ``C(L)`` are graded-symmetric products ``sx1∧…∧sxk`` of suspended
basis elements of ``L``. A word is kept in normal form: symbols sorted by
(suspended degree, label), with the Koszul sign of the sorting absorbed in
the coefficient. Suspended symbols of odd degree square to zero.

Sign conventions:

- ``d(sx) = -s(dx)`` and ``d(sx∧sy) ∋ (-1)^{|x|} s[x,y]``, extended as a
  coderivation. With these, ``pi(sx) = x`` satisfies
  ``pi∘d = -d∘pi - 1/2 [pi, pi]``.
- ``[f, g](w) = Σ ε (-1)^{|g||w'|} [f(w'), g(w'')]`` over ``Δ̄(w)``.
"""

from __future__ import annotations

from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Any, Generic

from dglm.config import SUITE_SAMPLE_LIMIT
from dglm.core.dglie import DgLieAlgebra, E, SuiteResult, Twisted, mc_residual, sign
from dglm.core.exactlin import (
    ONE,
    ZERO,
    ChainComplex,
    GradedLinearMap,
    InducedMap,
    Rational,
    Sampler,
    SpanBasis,
    Subcomplex,
    Vector,
    Witness,
    cycles,
    induced_map_on_homology,
    subcomplex,
    vec_axpy,
)
from dglm.core.gla_free import FreeGradedLie, LieMorphism, indecomposables
from dglm.errors import DegreeRangeExceeded, MCViolation, NotASubcomplex, NotInSpan
from dglm.utils.logging import get_logger

logger = get_logger(__name__)

Symbol = tuple[int, str]  # (degree in L, basis label)
Word = tuple[Symbol, ...]
Chain = dict[Word, Rational]


def sdeg(symbol: Symbol) -> int:
    return symbol[0] + 1


def word_degree(word: Sequence[Symbol]) -> int:
    return sum(sdeg(s) for s in word)


def word_label(word: Word) -> str:
    return "^".join(f"s{lab}" for _, lab in word) or "1"


def _key(symbol: Symbol) -> tuple[int, str]:
    return (sdeg(symbol), symbol[1])


def normalize(symbols: Sequence[Symbol]) -> tuple[int, Word]:
    """Sort into normal form; returns ``(sign, word)`` with sign 0 for a vanishing word."""
    items = list(symbols)
    s = 1
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            a, b = items[j], items[j + 1]
            if _key(a) > _key(b):
                items[j], items[j + 1] = b, a
                s *= sign(sdeg(a) * sdeg(b))
    for a, b in zip(items, items[1:]):
        if a == b and sdeg(a) % 2:
            return 0, ()
    return s, tuple(items)


def _shuffle_sign(word: Word, front: Sequence[int]) -> int:
    """Koszul sign of moving the positions ``front`` (in order) to the front."""
    chosen = set(front)
    exponent = 0
    passed = 0
    for i, sym in enumerate(word):
        if i in chosen:
            exponent += sdeg(sym) * passed
        else:
            passed += sdeg(sym)
    return sign(exponent)


class CECoalgebra(Generic[E]):
    """
    ``C(L)`` (or the reduced ``C̄(L)``) on word degrees ``[0, cutoff]``.

    ``L`` must be known up to degree ``cutoff - 1``. The differential is
    verified to square to zero when the chain complex is built.
    """

    def __init__(
        self,
        L: DgLieAlgebra[E],
        cutoff: int | None = None,
        *,
        reduced: bool = True,
        name: str | None = None,
    ):
        top = L.hi + 1 if cutoff is None else cutoff
        if top > L.hi + 1:
            raise DegreeRangeExceeded(f"C({L.name}) needs {L.name} up to", top - 1, L.lo, L.hi)
        if L.lo < 0 or (L.lo == 0 and L.dim(0)):
            raise DegreeRangeExceeded(f"C({L.name}) needs a connected algebra", 0, 1, L.hi)
        self.base = L
        self.reduced = reduced
        self.lo = 0
        self.hi = top
        self.name = name or (f"C̄({L.name})" if reduced else f"C({L.name})")
        self._elements: dict[Symbol, E] = {}
        for m in range(max(L.lo, 1), top):
            for lab, x in zip(L.labels(m), L.basis(m)):
                self._elements[(m, lab)] = x
        self.symbols: list[Symbol] = sorted(self._elements, key=_key)
        self._words: dict[int, list[Word]] = {}
        self._d: dict[Word, Chain] = {}
        self._cop: dict[Word, dict[tuple[Word, Word], Rational]] = {}
        self._enumerate()
        logger.debug("%s: word counts %s", self.name, {n: len(w) for n, w in self._words.items() if w})

    def _enumerate(self) -> None:
        self._words = {n: [] for n in range(self.lo, self.hi + 1)}
        if not self.reduced:
            self._words[0].append(())

        def grow(start: int, word: Word, degree: int) -> None:
            for idx in range(start, len(self.symbols)):
                sym = self.symbols[idx]
                n = degree + sdeg(sym)
                if n > self.hi:
                    continue
                self._words[n].append(word + (sym,))
                grow(idx + 1 if sdeg(sym) % 2 else idx, word + (sym,), n)

        grow(0, (), 0)

    def words(self, n: int) -> list[Word]:
        if not self.lo <= n <= self.hi:
            raise DegreeRangeExceeded(self.name, n, self.lo, self.hi)
        return self._words[n]

    def labels(self, n: int) -> list[str]:
        return [word_label(w) for w in self.words(n)]

    def all_words(self) -> Iterator[Word]:
        for n in range(self.lo, self.hi + 1):
            yield from self._words[n]

    def element(self, symbol: Symbol) -> E:
        return self._elements[symbol]

    def lift(self, x: E) -> list[tuple[Rational, Symbol]]:
        """Expand an element of ``L`` as ``Σ c · symbol``."""
        if not x:
            return []
        n = self.base.degree(x)
        return [
            (c, (n, lab))
            for lab, c in zip(self.base.labels(n), self.base.coordinates(x))
            if c
        ]

    def d(self, word: Word) -> Chain:
        cached = self._d.get(word)
        if cached is not None:
            return cached
        out: Chain = {}
        prefix = 0
        for i, sym in enumerate(word):
            for c, t in self.lift(self.base.differential(self.element(sym))):
                s, w = normalize(word[:i] + (t,) + word[i + 1 :])
                if s:
                    vec_axpy(out, -sign(prefix) * s * c, {w: ONE})
            prefix += sdeg(sym)
        for i, j in combinations(range(len(word)), 2):
            x, y = word[i], word[j]
            eps = _shuffle_sign(word, (i, j)) * sign(x[0])
            rest = word[:i] + word[i + 1 : j] + word[j + 1 :]
            bracket = self.base.bracket(self.element(x), self.element(y))
            for c, t in self.lift(bracket):
                s, w = normalize((t,) + rest)
                if s:
                    vec_axpy(out, eps * s * c, {w: ONE})
        self._d[word] = out
        return out

    def d_chain(self, chain: Mapping[Word, Rational]) -> Chain:
        out: Chain = {}
        for w, c in chain.items():
            vec_axpy(out, c, self.d(w))
        return out

    def coproduct(self, word: Word) -> dict[tuple[Word, Word], Rational]:
        """``Δ̄`` (reduced) or ``Δ`` (unreduced) of a word."""
        cached = self._cop.get(word)
        if cached is not None:
            return cached
        out: dict[tuple[Word, Word], Rational] = {}
        k = len(word)
        for size in range(1, k):
            for front in combinations(range(k), size):
                back = [i for i in range(k) if i not in front]
                left = tuple(word[i] for i in front)
                right = tuple(word[i] for i in back)
                vec_axpy(out, _shuffle_sign(word, front), {(left, right): ONE})
        if not self.reduced:
            vec_axpy(out, ONE, {((), word): ONE})
            if word:
                vec_axpy(out, ONE, {(word, ()): ONE})
        self._cop[word] = out
        return out

    def counit(self, word: Word) -> Rational:
        return ONE if word == () and not self.reduced else ZERO

    @cached_property
    def chain_complex(self) -> ChainComplex:
        bases = {n: self.labels(n) for n in range(self.lo, self.hi + 1)}
        images: dict[int, dict[str, Vector]] = {}
        for n in range(self.lo + 1, self.hi + 1):
            images[n] = {
                word_label(w): {word_label(v): c for v, c in self.d(w).items()}
                for w in self._words[n]
            }
        return ChainComplex.build(bases, images, self.lo, self.hi, self.name)


def build_ce(L: DgLieAlgebra[E], cutoff: int | None = None, *, reduced: bool = True) -> CECoalgebra[E]:
    """Build ``C(L)``/``C̄(L)`` and verify ``d² = 0`` through its chain complex."""
    ce = CECoalgebra(L, cutoff, reduced=reduced)
    ce.chain_complex  # noqa: B018
    return ce


def check_coalgebra(ce: CECoalgebra[Any], *, limit: int | None = SUITE_SAMPLE_LIMIT) -> list[SuiteResult]:
    """Cocommutativity, coassociativity and ``Δ̄ d = (d⊗1 + 1⊗d) Δ̄`` on words."""
    sampler = Sampler(limit)
    words = list(sampler.take(w for w in ce.all_words() if w))
    results = []
    for check, law in (
        ("cocommutativity", _cocommutative),
        ("coassociativity", _coassociative),
        ("codifferential", _codifferential),
    ):
        witness = None
        for count, w in enumerate(words, start=1):
            if not law(ce, w):
                witness = Witness(check, word_degree(w), word_label(w))
                break
        results.append(SuiteResult(check, count if words else 0, witness, sampler.truncated and witness is None))
    return results


def _cocommutative(ce: CECoalgebra[Any], w: Word) -> bool:
    cop = ce.coproduct(w)
    swapped: dict[tuple[Word, Word], Rational] = {}
    for (a, b), c in cop.items():
        vec_axpy(swapped, sign(word_degree(a) * word_degree(b)) * c, {(b, a): ONE})
    return swapped == cop


def _coassociative(ce: CECoalgebra[Any], w: Word) -> bool:
    left: dict[tuple[Word, Word, Word], Rational] = {}
    right: dict[tuple[Word, Word, Word], Rational] = {}
    for (a, b), c in ce.coproduct(w).items():
        for (a1, a2), c1 in ce.coproduct(a).items():
            vec_axpy(left, c * c1, {(a1, a2, b): ONE})
        for (b1, b2), c2 in ce.coproduct(b).items():
            vec_axpy(right, c * c2, {(a, b1, b2): ONE})
    return left == right


def _codifferential(ce: CECoalgebra[Any], w: Word) -> bool:
    lhs: dict[tuple[Word, Word], Rational] = {}
    for v, c in ce.d(w).items():
        vec_axpy(lhs, c, ce.coproduct(v))
    rhs: dict[tuple[Word, Word], Rational] = {}
    for (a, b), c in ce.coproduct(w).items():
        for v, x in ce.d(a).items():
            vec_axpy(rhs, c * x, {(v, b): ONE})
        for v, x in ce.d(b).items():
            vec_axpy(rhs, sign(word_degree(a)) * c * x, {(a, v): ONE})
    return lhs == rhs


# --------------------------------------------------------------------------- #
# Convolution algebras
# --------------------------------------------------------------------------- #


@dataclass(frozen=True, eq=False)
class ConvElement(Generic[E]):
    """Homogeneous linear map ``C -> X`` given by its values on words."""

    degree: int
    values: Mapping[Word, E] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", {w: v for w, v in self.values.items() if v})

    def _combine(self, other: ConvElement[E], c: int) -> ConvElement[E]:
        if not isinstance(other, ConvElement):
            return NotImplemented
        if self.values and other.values and self.degree != other.degree:
            raise ValueError(f"cannot add maps of degrees {self.degree} and {other.degree}")
        n = self.degree if self.values else other.degree
        out = dict(self.values)
        for w, v in other.values.items():
            term = v if c == 1 else -v
            out[w] = out[w] + term if w in out else term
        return ConvElement(n, out)

    def __add__(self, other: ConvElement[E]) -> ConvElement[E]:
        return self._combine(other, 1)

    def __sub__(self, other: ConvElement[E]) -> ConvElement[E]:
        return self._combine(other, -1)

    def __neg__(self) -> ConvElement[E]:
        return ConvElement(self.degree, {w: -v for w, v in self.values.items()})

    def __rmul__(self, c: Any) -> ConvElement[E]:
        return ConvElement(self.degree, {w: c * v for w, v in self.values.items()})

    def __bool__(self) -> bool:
        return bool(self.values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConvElement):
            return NotImplemented
        return not (self - other)

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        if not self.values:
            return "0"
        return "; ".join(f"{word_label(w)} ↦ {v}" for w, v in sorted(self.values.items()))


def _accumulate(out: dict[Word, Any], w: Word, x: Any) -> None:
    if x:
        out[w] = out[w] + x if w in out else x


class ConvolutionDgLie(DgLieAlgebra[ConvElement[E]]):
    """
    ``Hom(C, X)`` for a truncated CE coalgebra ``C = C̄_{≤M}(A)``.

    ``C̄_{≤M}`` is a sub-dg-coalgebra, so this is an honest dg Lie algebra.
    Degree ``p`` runs over ``[-M, X.hi - M]``; values on a word ``w`` live in
    ``X_{|w| + p}``. Basis labels read ``"word|x-label"``.
    """

    def __init__(self, coalgebra: CECoalgebra[Any], target: DgLieAlgebra[E], *, name: str | None = None):
        self.coalgebra = coalgebra
        self.target = target
        self.lo = -coalgebra.hi
        self.hi = target.hi - coalgebra.hi
        if self.hi < 0:
            raise DegreeRangeExceeded(
                f"Hom({coalgebra.name},{target.name}) needs {target.name} up to",
                coalgebra.hi,
                target.lo,
                target.hi,
            )
        self.name = name or f"Hom({coalgebra.name},{target.name})"
        self._bases: dict[int, tuple[list[str], list[ConvElement[E]]]] = {}

    def _layout(self, p: int) -> Iterator[tuple[Word, int]]:
        for m in range(self.coalgebra.lo, self.coalgebra.hi + 1):
            k = m + p
            if k < self.target.lo:
                continue
            for w in self.coalgebra.words(m):
                yield w, k

    def _basis(self, p: int) -> tuple[list[str], list[ConvElement[E]]]:
        self.check_degree(p)
        cached = self._bases.get(p)
        if cached is None:
            labels: list[str] = []
            elements: list[ConvElement[E]] = []
            for w, k in self._layout(p):
                wl = word_label(w)
                for lab, b in zip(self.target.labels(k), self.target.basis(k)):
                    labels.append(f"{wl}|{lab}")
                    elements.append(ConvElement(p, {w: b}))
            cached = (labels, elements)
            self._bases[p] = cached
            logger.debug("%s: dim in degree %d = %d", self.name, p, len(labels))
        return cached

    def basis(self, n: int) -> Sequence[ConvElement[E]]:
        return self._basis(n)[1]

    def labels(self, n: int) -> Sequence[str]:
        return self._basis(n)[0]

    def coordinates(self, f: ConvElement[E]) -> list[Rational]:
        p = f.degree
        self.check_degree(p)
        coords: list[Rational] = []
        seen = 0
        for w, k in self._layout(p):
            value = f.values.get(w)
            if value is None:
                coords.extend([ZERO] * self.target.dim(k))
                continue
            seen += 1
            coords.extend(self.target.coordinates(value))
        if seen != len(f.values):
            raise NotInSpan(f"{self.name}: map has values outside the truncated coalgebra")
        return coords

    def degree(self, f: ConvElement[E]) -> int:
        return f.degree

    def zero(self, n: int) -> ConvElement[E]:
        return ConvElement(n, {})

    def element(self, degree: int, values: Mapping[Word, E]) -> ConvElement[E]:
        return ConvElement(degree, values)

    def differential(self, f: ConvElement[E]) -> ConvElement[E]:
        """``∂f = d∘f - (-1)^{|f|} f∘d``."""
        p = f.degree
        out: dict[Word, E] = {}
        for w, v in f.values.items():
            _accumulate(out, w, self.target.differential(v))
        if f.values:
            s = -sign(p)
            for w, _k in self._layout(p - 1):
                total = None
                for v, c in self.coalgebra.d(w).items():
                    x = f.values.get(v)
                    if x:
                        term = (s * c) * x
                        total = term if total is None else total + term
                if total is not None:
                    _accumulate(out, w, total)
        return ConvElement(p - 1, out)

    def bracket(self, f: ConvElement[E], g: ConvElement[E]) -> ConvElement[E]:
        """``[f, g] = ℓ∘(f⊗g)∘Δ̄`` with the Koszul sign ``(-1)^{|g||w'|}``."""
        n = f.degree + g.degree
        out: dict[Word, E] = {}
        if not (f and g):
            return ConvElement(n, out)
        if n > self.hi:
            raise DegreeRangeExceeded(f"bracket in {self.name}", n, self.lo, self.hi)
        for w, _k in self._layout(n):
            total = None
            for (a, b), c in self.coalgebra.coproduct(w).items():
                x, y = f.values.get(a), g.values.get(b)
                if x and y:
                    term = (sign(g.degree * word_degree(a)) * c) * self.target.bracket(x, y)
                    total = term if total is None else total + term
            if total is not None:
                _accumulate(out, w, total)
        return ConvElement(n, out)


def default_word_cutoff(X: DgLieAlgebra[Any], A: DgLieAlgebra[Any] | None = None) -> int:
    """
    Word-degree truncation for ``Hom(C̄(A), X)``.

    When ``C̄(A)`` is finite (no generators, or a single even one) its top
    word degree is used, never below 1; otherwise ``X.hi // 2 + 1``.
    """
    if isinstance(A, FreeGradedLie):
        degrees = list(A.gen_degree.values())
        if not degrees:
            return 1
        if len(degrees) == 1 and degrees[0] % 2 == 0 and degrees[0] + 1 <= X.hi:
            return degrees[0] + 1
    return X.hi // 2 + 1


def build_convolution(
    A: DgLieAlgebra[Any],
    X: DgLieAlgebra[E],
    word_cutoff: int | None = None,
    *,
    reduced: bool = True,
) -> ConvolutionDgLie[E]:
    """
    ``Hom(C̄(A), X)`` with words of degree at most ``word_cutoff``.

    A free ``A`` known on too few degrees is extended to the needed cutoff.
    """
    m = word_cutoff if word_cutoff is not None else default_word_cutoff(X, A)
    if isinstance(A, FreeGradedLie) and A.hi < m - 1:
        logger.debug("extending %s to cutoff %d for its CE coalgebra", A.name, m - 1)
        A = A.with_cutoff(m - 1)
    ce = CECoalgebra(A, m, reduced=reduced)
    return ConvolutionDgLie(ce, X)


# --------------------------------------------------------------------------- #
# Twisting morphisms
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class TwistingMorphism(Generic[E]):
    """A degree -1 Maurer–Cartan element of a convolution algebra."""

    algebra: ConvolutionDgLie[E]
    element: ConvElement[E]
    name: str = "tau"

    def __call__(self, word: Word) -> E:
        value = self.element.values.get(word)
        if value is None:
            k = word_degree(word) - 1
            return self.algebra.target.zero(k)
        return value


def _verify_mc(conv: ConvolutionDgLie[E], element: ConvElement[E], name: str) -> None:
    residual = mc_residual(conv, element)
    if residual:
        w, v = sorted(residual.values.items())[0]
        raise MCViolation(
            f"{name} is not Maurer–Cartan in {conv.name}: "
            f"{Witness('∂τ + 1/2[τ,τ] = 0', word_degree(w), word_label(w), str(v))}"
        )
    logger.debug("%s satisfies the Maurer–Cartan equation in %s", name, conv.name)


def universal_twisting(L: FreeGradedLie, word_cutoff: int | None = None) -> TwistingMorphism[Any]:
    """``pi: C̄(L) -> L``, ``sx ↦ x`` on single symbols and zero on longer words."""
    conv = build_convolution(L, L, word_cutoff)
    ce = conv.coalgebra
    values = {(sym,): ce.element(sym) for sym in ce.symbols if sdeg(sym) <= ce.hi}
    pi = conv.element(-1, values)
    _verify_mc(conv, pi, "pi")
    return TwistingMorphism(conv, pi, "pi")


def tau_from_inclusion(i: LieMorphism, word_cutoff: int | None = None) -> TwistingMorphism[Any]:
    """``tau = i∘pi_A`` in ``Hom(C̄(L_A), L_X)``."""
    conv = build_convolution(i.source, i.target, word_cutoff)
    ce = conv.coalgebra
    values = {(sym,): i(ce.element(sym)) for sym in ce.symbols if sdeg(sym) <= ce.hi}
    tau = conv.element(-1, values)
    _verify_mc(conv, tau, "tau")
    return TwistingMorphism(conv, tau, "tau")


def twist(conv: ConvolutionDgLie[E], tau: ConvElement[E] | TwistingMorphism[E]) -> Twisted[ConvElement[E]]:
    """``Hom^tau``: same bracket, differential ``∂ + ad_tau``."""
    element = tau.element if isinstance(tau, TwistingMorphism) else tau
    return Twisted(conv, element, name=f"{conv.name}^τ")


def pushforward_tau(der: Any, theta: Any, tau: TwistingMorphism[E]) -> ConvElement[E]:
    """``tau_*(theta) = -(-1)^{|theta|} theta∘tau`` for a derivation ``theta`` of the target."""
    s = -sign(theta.degree)
    values = {w: s * der.evaluate(theta, v) for w, v in tau.element.values.items()}
    return ConvElement(theta.degree - 1, values)


# --------------------------------------------------------------------------- #
# Coderivations
# --------------------------------------------------------------------------- #


class Coderivation:
    """
    Coderivation of ``C(L)`` induced by a derivation ``theta`` of ``L``.

    ``Θ(sx1∧…∧sxk) = Σ (-1)^{|θ|(n_i + 1)} sx1∧…∧sθ(xi)∧…∧sxk`` where ``n_i`` is
    the degree of the symbols before position ``i``.
    """

    def __init__(self, ce: CECoalgebra[E], apply: Callable[[E], E], degree: int):
        self.ce = ce
        self.apply_theta = apply
        self.degree = degree

    def __call__(self, word: Word) -> Chain:
        out: Chain = {}
        prefix = 0
        for i, sym in enumerate(word):
            s0 = sign(self.degree * (prefix + 1))
            for c, t in self.ce.lift(self.apply_theta(self.ce.element(sym))):
                if sdeg(t) > self.ce.hi:
                    raise DegreeRangeExceeded(self.ce.name, sdeg(t), self.ce.lo, self.ce.hi)
                s, w = normalize(word[:i] + (t,) + word[i + 1 :])
                if s:
                    vec_axpy(out, s0 * s * c, {w: ONE})
            prefix += sdeg(sym)
        return out


def check_coderivation(
    theta: Coderivation, *, limit: int | None = SUITE_SAMPLE_LIMIT
) -> list[SuiteResult]:
    """``pi∘Θ = (-1)^{|θ|} θ∘pi`` and ``Δ̄Θ = (Θ⊗1 + 1⊗Θ)Δ̄`` on words."""
    ce = theta.ce
    top = ce.hi - max(theta.degree, 0)
    sampler = Sampler(limit)
    words = list(sampler.take(w for w in ce.all_words() if w and word_degree(w) <= top))
    pi_witness = None
    for w in words:
        image = theta(w)
        lhs = {v: c for v, c in image.items() if len(v) == 1}
        rhs: Chain = {}
        if len(w) == 1:
            for c, t in ce.lift(theta.apply_theta(ce.element(w[0]))):
                vec_axpy(rhs, sign(theta.degree) * c, {(t,): ONE})
        if lhs != rhs:
            pi_witness = Witness("π∘Θ = ±θ∘π", word_degree(w), word_label(w))
            break
    cop_witness = None
    for w in words:
        left: dict[tuple[Word, Word], Rational] = {}
        for v, c in theta(w).items():
            vec_axpy(left, c, ce.coproduct(v))
        right: dict[tuple[Word, Word], Rational] = {}
        for (a, b), c in ce.coproduct(w).items():
            for v, x in theta(a).items():
                vec_axpy(right, c * x, {(v, b): ONE})
            for v, x in theta(b).items():
                vec_axpy(right, sign(theta.degree * word_degree(a)) * c * x, {(a, v): ONE})
        if left != right:
            cop_witness = Witness("Δ̄Θ = (Θ⊗1 + 1⊗Θ)Δ̄", word_degree(w), word_label(w))
            break
    return [
        SuiteResult("coderivation-pi", len(words), pi_witness, sampler.truncated and pi_witness is None),
        SuiteResult("coderivation-coproduct", len(words), cop_witness, sampler.truncated and cop_witness is None),
    ]


# --------------------------------------------------------------------------- #
# Filtration and the indecomposables comparison
# --------------------------------------------------------------------------- #


def filtration_stage(conv: ConvolutionDgLie[Any], k: int) -> Subcomplex:
    """``F^k = Hom(C, X<k>)``: values in degrees above ``k`` or cycles in degree ``k``."""
    X = conv.target
    z_k = [] if k - 1 < X.lo else cycles(X.chain_complex, k)
    subspaces: dict[int, list[Vector]] = {}
    for p in range(conv.lo, conv.hi + 1):
        vectors: list[Vector] = []
        for w, m in conv._layout(p):
            wl = word_label(w)
            if m > k:
                vectors.extend({f"{wl}|{lab}": ONE} for lab in X.labels(m))
            elif m == k:
                vectors.extend({f"{wl}|{lab}": c for lab, c in z.items()} for z in z_k)
        subspaces[p] = vectors
    try:
        return subcomplex(conv.chain_complex, subspaces, conv.lo, conv.hi, f"F^{k}{conv.name}")
    except NotInSpan as exc:
        raise NotASubcomplex(f"F^{k} is not closed under ∂: {exc}") from exc


def check_filtration_brackets(
    conv: ConvolutionDgLie[Any], p: int, q: int, *, limit: int | None = SUITE_SAMPLE_LIMIT
) -> SuiteResult:
    """``[F^p, F^q] ⊆ F^{max(p, q)}`` on basis pairs of the two stages."""
    fp, fq = filtration_stage(conv, p), filtration_stage(conv, q)
    top = filtration_stage(conv, max(p, q))
    spans = {n: SpanBasis(list(vs), assume_independent=True) for n, vs in top.vectors.items()}
    sampler = Sampler(limit)
    pairs = (
        (a, b, x, y)
        for a, b in product(range(conv.lo, conv.hi + 1), repeat=2)
        if conv.lo <= a + b <= conv.hi
        for x, y in product(fp.vectors[a], fq.vectors[b])
    )
    for a, b, x, y in sampler.take(pairs):
        z = conv.bracket(conv.from_vector(a, x), conv.from_vector(b, y))
        if z and not spans[a + b].contains(conv.vector(z)):
            witness = Witness("[F^p, F^q] ⊆ F^max", a + b, f"p={p}, q={q}")
            return SuiteResult("filtration", sampler.count, witness)
    return SuiteResult("filtration", sampler.count, None, sampler.truncated)


def indecomposables_comparison(L: FreeGradedLie, lo: int, hi: int) -> InducedMap:
    """
    Homology map of ``C̄(L) -> sL -> Q(L)`` (degree -1), source degrees ``[lo, hi]``.

    Single-symbol words go to the linear part of their element; longer words
    go to zero.
    """
    ce = CECoalgebra(L, reduced=True)
    Q = indecomposables(L)
    images: dict[int, dict[str, Vector]] = {}
    for n in range(ce.lo + 1, ce.hi + 1):
        table: dict[str, Vector] = {}
        for w in ce.words(n):
            if len(w) == 1:
                x = ce.element(w[0])
                table[word_label(w)] = {g[0]: c for g, c in x.terms.items() if len(g) == 1}
        images[n] = table
    f = GradedLinearMap(
        ce.chain_complex.space, Q.space, -1, images, ce.lo + 1, ce.hi, sign=-1, name="C̄→Q"
    )
    return induced_map_on_homology(f, ce.chain_complex, Q, lo, hi)
