"""Maurer–Cartan elements, exact BCH products and the gauge action."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass
from itertools import product
from math import factorial
from typing import Any, Generic

from dglm.config import BCH_CLASS_LIMIT, GAUGE_TERM_LIMIT
from dglm.core.actions_semidirect import OuterAction
from dglm.core.dglie import DgLieAlgebra, E, mc_residual
from dglm.core.exactlin import Rational, Verdict, Witness, q
from dglm.errors import NilpotencyBoundExceeded, NotACycle, NotMaurerCartan
from dglm.utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class MCCheck(Generic[E]):
    ok: bool
    residual: E

    def __bool__(self) -> bool:
        return self.ok


def is_mc(g: DgLieAlgebra[E], a: E) -> MCCheck[E]:
    """Exact residual ``da + 1/2 [a, a]`` of a degree -1 element."""
    n = g.degree(a)
    g.check_degree(n)
    if n != -1:
        raise NotMaurerCartan(f"Maurer–Cartan elements have degree -1, got {n}")
    residual = mc_residual(g, a)
    return MCCheck(not residual, residual)


@dataclass(frozen=True)
class MCElement(Generic[E]):
    algebra: DgLieAlgebra[E]
    element: E

    def __post_init__(self) -> None:
        check = is_mc(self.algebra, self.element)
        if not check:
            raise NotMaurerCartan(f"residual {check.residual} in {self.algebra.name}")


# --------------------------------------------------------------------------- #
# Group elements and BCH
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class GroupElement(Generic[E]):
    """A degree 0 cycle of ``algebra`` read in ``exp(Z_0)``."""

    algebra: DgLieAlgebra[E]
    element: E

    def __post_init__(self) -> None:
        g = self.algebra
        if g.degree(self.element) != 0:
            raise NotACycle(f"group elements live in degree 0, got {g.degree(self.element)}")
        if g.differential(self.element):
            raise NotACycle(f"{self.element} is not a cycle of {g.name}")


def group_element(g: DgLieAlgebra[E], x: E) -> GroupElement[E]:
    return GroupElement(g, x)


class _NestedBrackets(Generic[E]):
    """Right-nested brackets ``[l1, [l2, [..., lk]]]`` of two letters, cached by word."""

    def __init__(self, g: DgLieAlgebra[E], x: E, y: E):
        self.g = g
        self._cache: dict[str, E] = {"x": x, "y": y}

    def __call__(self, word: str) -> E:
        value = self._cache.get(word)
        if value is None:
            value = self.g.bracket(self(word[0]), self(word[1:]))
            self._cache[word] = value
        return value


def nilpotency_class(g: DgLieAlgebra[E], x: E, y: E, bound: int = BCH_CLASS_LIMIT) -> int:
    """
    Smallest ``c`` such that every bracket of ``c + 1`` letters in ``x, y`` vanishes.

    Raises:
        NilpotencyBoundExceeded: when a bracket of ``bound + 1`` letters survives.
    """
    nested = _NestedBrackets(g, x, y)
    if not (x or y):
        return 0
    for k in range(2, bound + 2):
        if not any(nested("".join(w)) for w in product("xy", repeat=k)):
            return k - 1
    raise NilpotencyBoundExceeded(f"brackets of {bound + 1} letters do not vanish in {g.name}")


def _dynkin_blocks(total: int) -> Iterator[list[tuple[int, int]]]:
    """Sequences of ``(r_i, s_i)`` with ``r_i + s_i >= 1`` and ``Σ (r_i + s_i) = total``."""
    if total == 0:
        yield []
        return
    for size in range(1, total + 1):
        for r in range(size + 1):
            for rest in _dynkin_blocks(total - size):
                yield [(r, size - r), *rest]


def dynkin_terms(g: DgLieAlgebra[E], x: E, y: E, order: int) -> E:
    """Homogeneous order-``order`` part of ``log(e^x e^y)`` by Dynkin's formula."""
    nested = _NestedBrackets(g, x, y)
    total = g.zero(0)
    for blocks in _dynkin_blocks(order):
        word = "".join("x" * r + "y" * s for r, s in blocks)
        # right-nested brackets ending in xx or yy vanish
        if len(word) > 1 and word[-1] == word[-2]:
            continue
        n = len(blocks)
        denominator = n * order
        for r, s in blocks:
            denominator *= factorial(r) * factorial(s)
        c = q((-1) ** (n - 1), denominator)
        total = total + c * nested(word)
    return total


def bch(a: GroupElement[E], b: GroupElement[E], class_bound: int = BCH_CLASS_LIMIT) -> GroupElement[E]:
    """
    ``log(e^a e^b)``, exact once brackets beyond ``class_bound`` letters vanish.

    Raises:
        NilpotencyBoundExceeded: the brackets in ``a, b`` do not terminate by
            ``class_bound`` (at most :data:`BCH_CLASS_LIMIT`).
    """
    if class_bound > BCH_CLASS_LIMIT:
        raise NilpotencyBoundExceeded(f"class bound {class_bound} exceeds the limit {BCH_CLASS_LIMIT}")
    g = a.algebra
    c = nilpotency_class(g, a.element, b.element, class_bound)
    total = a.element + b.element
    for order in range(2, c + 1):
        total = total + dynkin_terms(g, a.element, b.element, order)
    logger.debug("bch in %s: class %d", g.name, c)
    return GroupElement(g, total)


def inverse(a: GroupElement[E]) -> GroupElement[E]:
    return GroupElement(a.algebra, -a.element)


# --------------------------------------------------------------------------- #
# Gauge action
# --------------------------------------------------------------------------- #


def _operators(
    x: GroupElement[Any], action: OuterAction | None
) -> tuple[Callable[[Any], Any], Any]:
    """``(theta_x, xi(x))``: ``(ad_x, dx)`` internally, ``(x.-, xi(x))`` for an outer action."""
    if action is None:
        g = x.algebra
        return (lambda a: g.bracket(x.element, a)), g.differential(x.element)
    return action.theta(x.element), action.xi(x.element)


def gauge_act(
    x: GroupElement[Any],
    a: MCElement[Any],
    action: OuterAction | None = None,
    *,
    term_limit: int = GAUGE_TERM_LIMIT,
) -> MCElement[Any]:
    """
    ``exp(x).a = a + Σ_{n>=0} theta_x^n(theta_x(a) - xi(x)) / (n+1)!``.

    Raises:
        NilpotencyBoundExceeded: ``theta_x`` is not nilpotent within
            ``term_limit`` applications.
    """
    theta, xi_x = _operators(x, action)
    term = theta(a.element) - xi_x
    total = a.element
    for n in range(term_limit + 1):
        if not term:
            return MCElement(a.algebra, total)
        total = total + q(1, factorial(n + 1)) * term
        term = theta(term)
    raise NilpotencyBoundExceeded(f"gauge series did not terminate after {term_limit} terms")


def check_action_property(
    x: GroupElement[Any],
    y: GroupElement[Any],
    a: MCElement[Any],
    action: OuterAction | None = None,
    *,
    class_bound: int = BCH_CLASS_LIMIT,
) -> Verdict:
    """``exp(bch(x, y)).a == exp(x).(exp(y).a)``."""
    lhs = gauge_act(bch(x, y, class_bound), a, action).element
    rhs = gauge_act(x, gauge_act(y, a, action), action).element
    if lhs - rhs:
        return Verdict(False, Witness("exp(x*y).a = exp(x).(exp(y).a)", -1, str(a.element), str(lhs - rhs)))
    return Verdict(True)


# --------------------------------------------------------------------------- #
# Finite orbit search
# --------------------------------------------------------------------------- #


def _key(g: DgLieAlgebra[Any], a: Any) -> tuple[tuple[str, Rational], ...]:
    return tuple(sorted(g.vector(a).items()))


def mc_solutions(g: DgLieAlgebra[E], coefficients: Sequence[int] = (-1, 0, 1)) -> list[MCElement[E]]:
    """Maurer–Cartan elements among ``Σ c_i b_i`` over the degree -1 basis, ``c_i`` in ``coefficients``."""
    basis = list(g.basis(-1))
    found: list[MCElement[E]] = []
    for coeffs in product(coefficients, repeat=len(basis)):
        a = g.combination(-1, [q(c) for c in coeffs])
        if is_mc(g, a):
            found.append(MCElement(g, a))
    logger.debug("%s: %d Maurer–Cartan points among %d candidates", g.name, len(found), len(coefficients) ** len(basis))
    return found


@dataclass(frozen=True)
class GaugeOrbits:
    points: list[MCElement[Any]]
    orbits: list[list[int]]
    moves: dict[tuple[int, int], int]

    def orbit_of(self, i: int) -> list[int]:
        return next(o for o in self.orbits if i in o)


def gauge_orbits(
    points: Sequence[MCElement[Any]],
    group: Iterable[GroupElement[Any]],
    action: OuterAction | None = None,
) -> GaugeOrbits:
    """
    Partition ``points`` by the gauge moves ``exp(x).-`` for ``x`` in ``group``.

    ``moves[(i, k)] = j`` records ``exp(x_k).p_i = p_j`` for moves that stay
    inside the finite set.
    """
    elements = list(group)
    if not points:
        return GaugeOrbits([], [], {})
    g = points[0].algebra
    index = {_key(g, p.element): i for i, p in enumerate(points)}
    parent = list(range(len(points)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    moves: dict[tuple[int, int], int] = {}
    for i, p in enumerate(points):
        for k, x in enumerate(elements):
            j = index.get(_key(g, gauge_act(x, p, action).element))
            if j is None:
                continue
            moves[(i, k)] = j
            parent[find(i)] = find(j)
    grouped: dict[int, list[int]] = {}
    for i in range(len(points)):
        grouped.setdefault(find(i), []).append(i)
    return GaugeOrbits(list(points), sorted(grouped.values()), moves)


def check_orbit_symmetry(
    orbits: GaugeOrbits, group: Sequence[GroupElement[Any]], action: OuterAction | None = None
) -> Verdict:
    """Every recorded move ``p_i -> p_j`` by ``exp(x)`` is undone by ``exp(-x)``."""
    for (i, k), j in orbits.moves.items():
        back = gauge_act(inverse(group[k]), orbits.points[j], action).element
        if back - orbits.points[i].element:
            return Verdict(False, Witness("exp(-x).(exp(x).a) = a", -1, f"point {i}, move {k}"))
    return Verdict(True)


def find_gauge_parameter(
    x: GroupElement[Any],
    a: MCElement[Any],
    b: MCElement[Any],
    action: OuterAction | None = None,
    *,
    candidates: Iterable[Any] = range(-4, 5),
) -> Rational | None:
    """First ``t`` among ``candidates`` with ``exp(t x).a == b``, else ``None``."""
    for t in candidates:
        c = q(t)
        moved = gauge_act(GroupElement(x.algebra, c * x.element), a, action).element
        if not (moved - b.element):
            logger.debug("exp(%s x) carries %s to %s", t, a.element, b.element)
            return c
    return None
