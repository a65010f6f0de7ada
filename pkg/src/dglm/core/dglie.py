"""Generic dg Lie algebras with finite per-degree bases.

Every algebra in dglm (free Lie algebras, derivation complexes,
convolution algebras, semidirect products) implements ``DgLieAlgebra``;
covers, twists and the exact sign-law suites are written once here.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Any, Generic, Protocol, TypeVar

from dglm.config import SUITE_SAMPLE_LIMIT
from dglm.core.exactlin import (
    ZERO,
    ChainComplex,
    GradedLinearMap,
    Rational,
    Sampler,
    SpanBasis,
    Vector,
    Witness,
    cycles,
    q,
)
from dglm.errors import DegreeRangeExceeded, NotMaurerCartan
from dglm.utils.logging import get_logger

logger = get_logger(__name__)


class Element(Protocol):
    def __add__(self: E, other: E) -> E: ...
    def __sub__(self: E, other: E) -> E: ...
    def __neg__(self: E) -> E: ...
    def __rmul__(self: E, c: Any) -> E: ...
    def __bool__(self) -> bool: ...


E = TypeVar("E", bound=Element)


def sign(exponent: int) -> int:
    """(-1) ** exponent."""
    return -1 if exponent % 2 else 1


class DgLieAlgebra(ABC, Generic[E]):
    """
    Homologically graded dg Lie algebra known on degrees ``[lo, hi]``.

    ``basis(n)`` and ``coordinates`` are exact; anything outside the valid
    range raises ``DegreeRangeExceeded`` instead of being treated as zero.
    """

    name: str = "g"
    lo: int
    hi: int

    @abstractmethod
    def basis(self, n: int) -> Sequence[E]: ...

    @abstractmethod
    def labels(self, n: int) -> Sequence[str]: ...

    @abstractmethod
    def coordinates(self, x: E) -> list[Rational]: ...

    @abstractmethod
    def degree(self, x: E) -> int: ...

    @abstractmethod
    def zero(self, n: int) -> E: ...

    @abstractmethod
    def differential(self, x: E) -> E: ...

    @abstractmethod
    def bracket(self, x: E, y: E) -> E: ...

    def check_degree(self, n: int) -> None:
        if not self.lo <= n <= self.hi:
            raise DegreeRangeExceeded(self.name, n, self.lo, self.hi)

    def combination(self, n: int, coeffs: Sequence[Any]) -> E:
        out = self.zero(n)
        for c, b in zip(coeffs, self.basis(n)):
            if c:
                out = out + q(c) * b
        return out

    def vector(self, x: E) -> Vector:
        n = self.degree(x)
        return {lab: c for lab, c in zip(self.labels(n), self.coordinates(x)) if c}

    def from_vector(self, n: int, v: Mapping[str, Rational]) -> E:
        labels = self.labels(n)
        return self.combination(n, [v.get(lab, ZERO) for lab in labels])

    def dim(self, n: int) -> int:
        return len(self.basis(n))

    @cached_property
    def chain_complex(self) -> ChainComplex:
        bases = {n: list(self.labels(n)) for n in range(self.lo, self.hi + 1)}
        images: dict[int, dict[str, Vector]] = {}
        for n in range(self.lo + 1, self.hi + 1):
            images[n] = {
                lab: self.vector(self.differential(b))
                for lab, b in zip(self.labels(n), self.basis(n))
            }
        return ChainComplex.build(bases, images, self.lo, self.hi, self.name)


# --------------------------------------------------------------------------- #
# Covers and twists
# --------------------------------------------------------------------------- #


class ConnectedCover(DgLieAlgebra[E]):
    """The ``n``-connected cover ``g<n>``: cycles in degree n, all of g above."""

    def __init__(self, base: DgLieAlgebra[E], n: int):
        if n - 1 < base.lo:
            raise DegreeRangeExceeded(f"cover of {base.name}", n - 1, base.lo, base.hi)
        self.base = base
        self.cut = n
        self.lo = n - 1
        self.hi = base.hi
        self.name = f"{base.name}<{n}>"
        self._cycles = [base.from_vector(n, z) for z in cycles(base.chain_complex, n)]
        self._span = SpanBasis([base.vector(z) for z in self._cycles], assume_independent=True)
        logger.debug("%s: %d cycles in degree %d", self.name, len(self._cycles), n)

    def basis(self, n: int) -> Sequence[E]:
        self.check_degree(n)
        if n < self.cut:
            return []
        if n == self.cut:
            return self._cycles
        return self.base.basis(n)

    def labels(self, n: int) -> Sequence[str]:
        self.check_degree(n)
        if n < self.cut:
            return []
        if n == self.cut:
            return [f"z{i:04d}" for i in range(len(self._cycles))]
        return self.base.labels(n)

    def coordinates(self, x: E) -> list[Rational]:
        n = self.degree(x)
        self.check_degree(n)
        if n < self.cut:
            if x:
                raise DegreeRangeExceeded(f"{self.name} element", n, self.cut, self.hi)
            return []
        if n == self.cut:
            return self._span.coordinates(self.base.vector(x))
        return self.base.coordinates(x)

    def degree(self, x: E) -> int:
        return self.base.degree(x)

    def zero(self, n: int) -> E:
        return self.base.zero(n)

    def differential(self, x: E) -> E:
        if self.degree(x) <= self.cut:
            return self.base.zero(self.degree(x) - 1)
        return self.base.differential(x)

    def bracket(self, x: E, y: E) -> E:
        return self.base.bracket(x, y)


def mc_residual(g: DgLieAlgebra[E], a: E) -> E:
    """``da + 1/2 [a, a]``."""
    return g.differential(a) + q(1, 2) * g.bracket(a, a)


class Twisted(DgLieAlgebra[E]):
    """Same graded Lie algebra with differential ``d + ad_tau``."""

    def __init__(self, base: DgLieAlgebra[E], tau: E, *, name: str | None = None):
        if base.degree(tau) != -1:
            raise NotMaurerCartan("a twisting element must have degree -1")
        residual = mc_residual(base, tau)
        if residual:
            raise NotMaurerCartan(f"twisting element is not Maurer-Cartan in {base.name}")
        self.base = base
        self.tau = tau
        self.lo = base.lo
        self.hi = base.hi
        self.name = name or f"{base.name}^tau"

    def basis(self, n: int) -> Sequence[E]:
        return self.base.basis(n)

    def labels(self, n: int) -> Sequence[str]:
        return self.base.labels(n)

    def coordinates(self, x: E) -> list[Rational]:
        return self.base.coordinates(x)

    def degree(self, x: E) -> int:
        return self.base.degree(x)

    def zero(self, n: int) -> E:
        return self.base.zero(n)

    def differential(self, x: E) -> E:
        return self.base.differential(x) + self.base.bracket(self.tau, x)

    def bracket(self, x: E, y: E) -> E:
        return self.base.bracket(x, y)


# --------------------------------------------------------------------------- #
# Sign-law suites
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class SuiteResult:
    name: str
    checked: int
    witness: Witness | None = None
    truncated: bool = False

    @property
    def failed(self) -> bool:
        return self.witness is not None

    @property
    def ok(self) -> bool:
        """Every case was checked and none failed."""
        return not self.failed and not self.truncated


def _labelled(g: DgLieAlgebra[E], n: int) -> list[tuple[str, E]]:
    return list(zip(g.labels(n), g.basis(n)))


def _degree_tuples(g: DgLieAlgebra[E], arity: int, top: int) -> Iterator[tuple[int, ...]]:
    degrees = [n for n in range(g.lo, g.hi + 1) if g.dim(n)]
    for combo in product(degrees, repeat=arity):
        total = sum(combo)
        if g.lo <= total <= top:
            yield combo


def _result(name: str, sampler: Sampler, witness: Witness | None = None) -> SuiteResult:
    return SuiteResult(name, sampler.count, witness, sampler.truncated and witness is None)


def check_d_squared(g: DgLieAlgebra[E]) -> SuiteResult:
    count = 0
    for n in range(g.lo + 2, g.hi + 1):
        for lab, x in _labelled(g, n):
            count += 1
            if g.differential(g.differential(x)):
                return SuiteResult("dsquare", count, Witness("d∘d = 0", n, lab))
    return SuiteResult("dsquare", count)


def check_antisymmetry(g: DgLieAlgebra[E], *, limit: int | None = SUITE_SAMPLE_LIMIT) -> SuiteResult:
    sampler = Sampler(limit)
    for m, n in _degree_tuples(g, 2, g.hi):
        pairs = product(_labelled(g, m), _labelled(g, n))
        for (lx, x), (ly, y) in sampler.take(pairs):
            lhs = g.bracket(x, y)
            rhs = sign(m * n + 1) * g.bracket(y, x)
            if lhs - rhs:
                return _result("antisymmetry", sampler, Witness("graded antisymmetry", m + n, f"[{lx},{ly}]"))
    return _result("antisymmetry", sampler)


def check_jacobi(g: DgLieAlgebra[E], *, limit: int | None = SUITE_SAMPLE_LIMIT) -> SuiteResult:
    """[x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]] on basis triples."""
    sampler = Sampler(limit)
    for a, b, c in _degree_tuples(g, 3, g.hi):
        triples = product(_labelled(g, a), _labelled(g, b), _labelled(g, c))
        for (lx, x), (ly, y), (lz, z) in sampler.take(triples):
            lhs = g.bracket(x, g.bracket(y, z))
            rhs = g.bracket(g.bracket(x, y), z) + sign(a * b) * g.bracket(y, g.bracket(x, z))
            if lhs - rhs:
                return _result("jacobi", sampler, Witness("graded Jacobi", a + b + c, f"({lx},{ly},{lz})"))
    return _result("jacobi", sampler)


def check_leibniz(g: DgLieAlgebra[E], *, limit: int | None = SUITE_SAMPLE_LIMIT) -> SuiteResult:
    """d[x,y] = [dx,y] + (-1)^{|x|} [x,dy]."""
    sampler = Sampler(limit)
    for m, n in _degree_tuples(g, 2, g.hi):
        if m + n - 1 < g.lo or m - 1 < g.lo or n - 1 < g.lo:
            continue
        pairs = product(_labelled(g, m), _labelled(g, n))
        for (lx, x), (ly, y) in sampler.take(pairs):
            lhs = g.differential(g.bracket(x, y))
            rhs = g.bracket(g.differential(x), y) + sign(m) * g.bracket(x, g.differential(y))
            if lhs - rhs:
                return _result("leibniz", sampler, Witness("Leibniz", m + n, f"[{lx},{ly}]"))
    return _result("leibniz", sampler)


def check_dg_lie(g: DgLieAlgebra[E], *, limit: int | None = SUITE_SAMPLE_LIMIT) -> list[SuiteResult]:
    """The four sign-law suites; ``limit`` caps each degree combination and marks the result truncated."""
    return [
        check_d_squared(g),
        check_antisymmetry(g, limit=limit),
        check_jacobi(g, limit=limit),
        check_leibniz(g, limit=limit),
    ]


def graded_map(
    source: DgLieAlgebra[Any],
    target: DgLieAlgebra[Any],
    fn: Callable[[Any], Any],
    *,
    shift: int,
    lo: int | None = None,
    hi: int | None = None,
    parity: int | None = None,
    name: str = "",
) -> GradedLinearMap:
    """Matrix form of an element-level map, on the source degrees where both sides exist."""
    first = max(source.lo, target.lo - shift) if lo is None else lo
    last = min(source.hi, target.hi - shift) if hi is None else hi
    images: dict[int, dict[str, Vector]] = {}
    for n in range(first, last + 1):
        images[n] = {
            lab: target.vector(fn(b)) for lab, b in zip(source.labels(n), source.basis(n))
        }
    return GradedLinearMap(
        source.chain_complex.space,
        target.chain_complex.space,
        shift,
        images,
        first,
        last,
        sign=sign(shift) if parity is None else parity,
        name=name,
    )
