"""Built-in models: complex projective spaces, spheres, disks and a boundary inclusion."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from dglm.core.exactlin import ONE, Rational, q, vec_axpy
from dglm.core.gla_free import FreeGradedLie
from dglm.errors import InvalidModel, NotACycle
from dglm.models.parser import Bracket, Expr, Gen, MapSpec, ModelFile, ModelSpec, Sum, evaluate
from dglm.utils.logging import get_logger

logger = get_logger(__name__)

BUILTIN_PREFIX = "builtin:"


def _bracket_sum(
    terms: Sequence[tuple[Rational, str, str]], order: Sequence[str], degrees: Mapping[str, int]
) -> Expr:
    """``Σ c [a, b]`` rewritten on brackets ``[a, b]`` with ``a`` before ``b`` in ``order``."""
    rank = {g: i for i, g in enumerate(order)}
    collected: dict[tuple[str, str], Rational] = {}
    for c, a, b in terms:
        if rank[a] > rank[b]:
            c = c * (-1 if (degrees[a] * degrees[b]) % 2 == 0 else 1)
            a, b = b, a
        if a == b and degrees[a] % 2 == 0:
            continue
        vec_axpy(collected, c, {(a, b): ONE})
    atoms = sorted(collected.items(), key=lambda kv: (rank[kv[0][0]], rank[kv[0][1]]))
    out = [(c, Bracket(Gen(a), Gen(b))) for (a, b), c in atoms]
    if len(out) == 1 and out[0][0] == ONE:
        return out[0][1]
    return Sum(tuple(out))


# --------------------------------------------------------------------------- #
# CP^k
# --------------------------------------------------------------------------- #


def cp_model(k: int) -> ModelSpec:
    """``L(x_1, ..., x_k)``, ``|x_i| = 2i - 1``, ``d x_i = 1/2 Σ_{p+q=i} [x_p, x_q]``."""
    if k < 1:
        raise InvalidModel(f"CP^k needs k >= 1, got {k}")
    names = [f"x{i}" for i in range(1, k + 1)]
    degrees = {f"x{i}": 2 * i - 1 for i in range(1, k + 1)}
    differential: list[tuple[str, Expr]] = []
    for i in range(2, k + 1):
        terms = [(q(1, 2), f"x{p}", f"x{i - p}") for p in range(1, i)]
        differential.append((f"x{i}", _bracket_sum(terms, names, degrees)))
    return ModelSpec(f"CP{k}", tuple((g, degrees[g]) for g in names), tuple(differential))


def cp_inclusion(k: int, n: int) -> ModelFile:
    """``CP^k ⊂ CP^n`` as the map ``i`` sending ``x_j`` to ``x_j``."""
    if not 1 <= k < n:
        raise InvalidModel(f"CP^{k} ⊂ CP^{n} needs 1 <= k < n")
    source, target = cp_model(k), cp_model(n)
    images = tuple((g, Gen(g)) for g, _ in source.generators)
    return ModelFile((source, target), (MapSpec("i", source.name, target.name, images),))


# --------------------------------------------------------------------------- #
# Spheres and disks
# --------------------------------------------------------------------------- #


def sphere_model(n: int) -> ModelSpec:
    """``L(u)`` with ``|u| = n - 2``, a model of ``S^{n-1}``."""
    if n < 3:
        raise InvalidModel(f"S^{n - 1} is not simply connected; sphere models need n >= 3")
    return ModelSpec(f"S{n - 1}", (("u", n - 2),))


@dataclass(frozen=True)
class DiskPair:
    name: str
    file: ModelFile
    cofibration: bool


def disk_pairs() -> tuple[DiskPair, DiskPair]:
    """
    ``S^3 ⊂ D^4`` twice: as the free map ``L(u) -> L(u, v)``, ``dv = u``, and
    as ``u ↦ [a, a]`` into ``L(a, b)``, ``db = a``, which is not free.
    """
    a = ModelSpec("A", (("u", 2),))
    d = ModelSpec("D", (("u", 2), ("v", 3)), (("v", Gen("u")),))
    first = ModelFile((a, d), (MapSpec("i", "A", "D", (("u", Gen("u")),)),))
    x = ModelSpec("X", (("a", 1), ("b", 2)), (("b", Gen("a")),))
    second = ModelFile((a, x), (MapSpec("i", "A", "X", (("u", Bracket(Gen("a"), Gen("a"))),)),))
    return DiskPair("disk1", first, True), DiskPair("disk2", second, False)


# --------------------------------------------------------------------------- #
# Boundary inclusion
# --------------------------------------------------------------------------- #


def boundary_model(
    degrees: Mapping[str, int] | None = None,
    pairing: Mapping[str, str] | None = None,
    n: int = 4,
    differential: Mapping[str, Expr] | None = None,
) -> ModelFile:
    """
    ``L(u) -> L(V, u, v)`` with ``dv = u - ω`` and ``ω = 1/2 Σ [x_i^#, x_i]``.

    ``pairing`` sends each basis generator of ``V`` to its dual; the
    default is two degree 1 generators dual to each other.

    Raises:
        InvalidModel: a pair whose degrees do not add up to ``n - 2``.
        NotACycle: ``dω != 0`` in ``L(V)``.
    """
    degrees = dict(degrees or {"x1": 1, "x2": 1})
    pairing = dict(pairing or {"x1": "x2", "x2": "x1"})
    order = list(degrees)
    for x, dual in pairing.items():
        if x not in degrees or dual not in degrees:
            raise InvalidModel(f"pairing {x} -> {dual} uses an unknown generator")
        if degrees[x] + degrees[dual] != n - 2:
            raise InvalidModel(f"|{dual}| + |{x}| = {degrees[x] + degrees[dual]}, expected {n - 2}")
    if "u" in degrees or "v" in degrees:
        raise InvalidModel("u and v are reserved for the attached cell")
    omega = _bracket_sum([(q(1, 2), dual, x) for x, dual in pairing.items()], order, degrees)
    base_d = tuple((differential or {}).items())
    top = max(degrees.values(), default=1)
    base = ModelSpec("V", tuple(degrees.items()), base_d).build(max(n - 1, top))
    d_omega = base.apply_d(evaluate(omega, degrees, n - 2))
    if d_omega:
        raise NotACycle(f"dω = {d_omega} is not zero")
    full = {**degrees, "u": n - 2, "v": n - 1}
    dv = Sum(((ONE, Gen("u")), *((-c, atom) for c, atom in _terms(omega))))
    x = ModelSpec("X", tuple(full.items()), (*base_d, ("v", dv)))
    a = ModelSpec("A", (("u", n - 2),))
    logger.debug("boundary model with ω = %s", omega)
    return ModelFile((a, x), (MapSpec("i", "A", "X", (("u", Gen("u")),)),))


def _terms(expr: Expr) -> tuple[tuple[Rational, Gen | Bracket], ...]:
    if isinstance(expr, Sum):
        return expr.terms
    return ((ONE, expr),)


# --------------------------------------------------------------------------- #
# References
# --------------------------------------------------------------------------- #


def resolve(reference: str) -> ModelFile:
    """
    ``cp:k``, ``cp:k:n``, ``sphere:n``, ``disk:1``, ``disk:2`` or ``boundary``
    (optionally prefixed with ``builtin:``).
    """
    text = reference.removeprefix(BUILTIN_PREFIX)
    kind, *args = text.split(":")
    try:
        numbers = [int(a) for a in args]
    except ValueError:
        raise InvalidModel(f"builtin arguments must be integers: {reference!r}") from None
    if kind == "cp" and len(numbers) == 1:
        return ModelFile((cp_model(numbers[0]),))
    if kind == "cp" and len(numbers) == 2:
        return cp_inclusion(*numbers)
    if kind == "sphere" and len(numbers) == 1:
        return ModelFile((sphere_model(numbers[0]),))
    if kind == "disk" and len(numbers) == 1 and numbers[0] in (1, 2):
        return disk_pairs()[numbers[0] - 1].file
    if kind == "boundary" and not numbers:
        return boundary_model()
    raise InvalidModel(f"unknown builtin {reference!r}")


def is_builtin(reference: str) -> bool:
    return reference.startswith(BUILTIN_PREFIX)


def builtin_lie(reference: str, cutoff: int, model: str | None = None) -> FreeGradedLie:
    return resolve(reference).model(model).build(cutoff)
