"""Exact rational linear algebra, graded vector spaces and chain complexes.

All scalars are elements of ``sympy.QQ``. Rank and kernel computations go
through ``DomainMatrix.rref_den`` with fraction-free elimination, so no
floating point enters anywhere.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from itertools import islice
from typing import Any, TypeVar

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from dglm.errors import DegreeRangeExceeded, InvalidModel, NotAChainMap, NotInSpan
from dglm.utils.logging import get_logger

logger = get_logger(__name__)

Rational = Any  # element type of sympy.QQ (PythonMPQ or gmpy2.mpq)
K = TypeVar("K", bound=Hashable)
T = TypeVar("T")
Vector = dict[Any, Rational]
Matrix = Sequence[Sequence[Rational]]

ZERO = QQ.zero
ONE = QQ.one


def q(value: Any, denominator: int | None = None) -> Rational:
    """Coerce ``value`` (int, ``"p/q"`` string or QQ element) into ``QQ``."""
    if denominator is not None:
        return QQ(int(value), int(denominator))
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return QQ(int(num), int(den))
        return QQ(int(text))
    if isinstance(value, int):
        return QQ(value)
    return QQ.convert(value)


def format_rational(value: Rational) -> str:
    """Print a rational as ``p/q``, or ``p`` when integral."""
    value = QQ.convert(value)
    num, den = int(value.numerator), int(value.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def _sort_key(key: Any) -> tuple[str, str]:
    return (type(key).__name__, repr(key))


# --------------------------------------------------------------------------- #
# Sparse vectors
# --------------------------------------------------------------------------- #


def vec_add(*vectors: Mapping[K, Rational]) -> dict[K, Rational]:
    out: dict[K, Rational] = {}
    for v in vectors:
        for k, c in v.items():
            s = out.get(k, ZERO) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def vec_scale(c: Rational, v: Mapping[K, Rational]) -> dict[K, Rational]:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def vec_axpy(out: dict[K, Rational], c: Rational, v: Mapping[K, Rational]) -> None:
    """In-place ``out += c * v`` with zero pruning."""
    if not c:
        return
    for k, x in v.items():
        s = out.get(k, ZERO) + c * x
        if s:
            out[k] = s
        else:
            out.pop(k, None)


def vec_sub(a: Mapping[K, Rational], b: Mapping[K, Rational]) -> dict[K, Rational]:
    out = dict(a)
    vec_axpy(out, -ONE, b)
    return out


# --------------------------------------------------------------------------- #
# Elimination
# --------------------------------------------------------------------------- #


def _domain_matrix(rows: Sequence[Mapping[int, Rational]], ncols: int) -> DomainMatrix:
    dod = {i: {j: QQ.convert(c) for j, c in row.items() if c} for i, row in enumerate(rows)}
    dod = {i: r for i, r in dod.items() if r}
    return DomainMatrix(dod, (len(rows), ncols), QQ)


@dataclass(frozen=True)
class Echelon:
    """Reduced row echelon form of a sparse matrix."""

    rows: tuple[dict[int, Rational], ...]
    pivots: tuple[int, ...]
    ncols: int

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rref(rows: Sequence[Mapping[int, Rational]], ncols: int) -> Echelon:
    """Fraction-free reduced row echelon form (``rref_den`` with Bareiss)."""
    if not rows or ncols == 0:
        return Echelon((), (), ncols)
    reduced, _den, pivots = _domain_matrix(rows, ncols).rref_den(method="FF")
    table: dict[int, dict[int, Rational]] = {}
    for (i, j), c in reduced.to_dok().items():
        if c:
            table.setdefault(i, {})[j] = c
    kept = tuple(table.get(i, {}) for i in range(len(pivots)))
    return Echelon(kept, tuple(pivots), ncols)


def sparse_kernel(rows: Sequence[Mapping[int, Rational]], ncols: int) -> list[dict[int, Rational]]:
    """Null space basis of a sparse ``len(rows) x ncols`` matrix."""
    ech = rref(rows, ncols)
    pivot_set = set(ech.pivots)
    basis: list[dict[int, Rational]] = []
    for j in range(ncols):
        if j in pivot_set:
            continue
        v: dict[int, Rational] = {j: ONE}
        for row, p in zip(ech.rows, ech.pivots):
            c = row.get(j)
            if c:
                v[p] = -c / row[p]
        basis.append(v)
    return basis


def kernel_basis(m: Matrix) -> list[list[Rational]]:
    """
    Exact basis of the null space of ``m``.

    Args:
        m: Dense matrix given as a sequence of rows of rationals.

    Returns:
        One dense vector per kernel basis element, in a deterministic order.
    """
    if not m:
        return []
    ncols = len(m[0])
    rows = [{j: q(c) for j, c in enumerate(r) if c} for r in m]
    return [[v.get(j, ZERO) for j in range(ncols)] for v in sparse_kernel(rows, ncols)]


def rank(rows: Sequence[Mapping[int, Rational]], ncols: int) -> int:
    return rref(rows, ncols).rank


def independent_indices(vectors: Sequence[Mapping[Any, Rational]]) -> list[int]:
    """Indices of the greedily chosen linearly independent vectors, in order."""
    keys = sorted({k for v in vectors for k in v}, key=_sort_key)
    if not keys:
        return []
    index = {k: i for i, k in enumerate(keys)}
    # columns are the vectors: pivots of the transpose pick the greedy subset
    cols: list[dict[int, Rational]] = [{} for _ in keys]
    for j, v in enumerate(vectors):
        for k, c in v.items():
            if c:
                cols[index[k]][j] = c
    return list(rref(cols, len(vectors)).pivots)


class SpanBasis:
    """
    Coordinates with respect to a list of spanning vectors.

    The vectors are thinned to a greedily chosen independent subset; the
    coordinates of a vector in the span are computed through the inverse of
    the square submatrix on pivot keys and then checked exactly.
    """

    def __init__(self, vectors: Sequence[Mapping[Any, Rational]], *, assume_independent: bool = False):
        chosen = (
            list(range(len(vectors))) if assume_independent else independent_indices(vectors)
        )
        self.selected: tuple[int, ...] = tuple(chosen)
        self.vectors: tuple[dict[Any, Rational], ...] = tuple(dict(vectors[i]) for i in chosen)
        keys = sorted({k for v in self.vectors for k in v}, key=_sort_key)
        index = {k: i for i, k in enumerate(keys)}
        rows = [{index[k]: c for k, c in v.items()} for v in self.vectors]
        ech = rref(rows, len(keys))
        if ech.rank != len(self.vectors):
            raise NotInSpan("spanning vectors handed in as independent are dependent")
        self._pivot_keys = [keys[p] for p in ech.pivots]
        size = len(self.vectors)
        self._inverse: list[dict[int, Rational]] = []
        if size:
            square = [
                {j: v[k] for j, k in enumerate(self._pivot_keys) if k in v} for v in self.vectors
            ]
            inv = _domain_matrix(square, size).inv()
            self._inverse = [{} for _ in range(size)]
            for (i, j), c in inv.to_dok().items():
                if c:
                    self._inverse[i][j] = c

    def __len__(self) -> int:
        return len(self.vectors)

    def coordinates(self, v: Mapping[Any, Rational]) -> list[Rational]:
        """Coordinates ``c`` with ``sum(c[j] * vectors[j]) == v``; raises NotInSpan."""
        coords = [ZERO] * len(self.vectors)
        for p, key in enumerate(self._pivot_keys):
            x = v.get(key)
            if x:
                for j, c in self._inverse[p].items():
                    coords[j] += x * c
        rebuilt: dict[Any, Rational] = {}
        for c, vec in zip(coords, self.vectors):
            vec_axpy(rebuilt, c, vec)
        if vec_sub(rebuilt, v):
            raise NotInSpan("vector is not in the span")
        return coords

    def contains(self, v: Mapping[Any, Rational]) -> bool:
        try:
            self.coordinates(v)
        except NotInSpan:
            return False
        return True


def solve(columns: Sequence[Mapping[Any, Rational]], target: Mapping[Any, Rational]) -> list[Rational] | None:
    """A particular solution ``x`` of ``sum(x[j] * columns[j]) == target``, or None."""
    keys = sorted({k for c in columns for k in c} | set(target), key=_sort_key)
    if not target:
        return [ZERO] * len(columns)
    index = {k: i for i, k in enumerate(keys)}
    n = len(columns)
    rows: list[dict[int, Rational]] = [{} for _ in keys]
    for j, col in enumerate(columns):
        for k, c in col.items():
            rows[index[k]][j] = c
    for k, c in target.items():
        rows[index[k]][n] = c
    ech = rref(rows, n + 1)
    if n in ech.pivots:
        return None
    x = [ZERO] * n
    for row, p in zip(ech.rows, ech.pivots):
        x[p] = row.get(n, ZERO) / row[p]
    return x


# --------------------------------------------------------------------------- #
# Graded objects
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class Witness:
    """First failure of an exact check."""

    check: str
    degree: int | None
    element: str
    detail: str = ""

    def __str__(self) -> str:
        where = f" in degree {self.degree}" if self.degree is not None else ""
        extra = f": {self.detail}" if self.detail else ""
        return f"{self.check} fails at {self.element}{where}{extra}"


@dataclass(frozen=True)
class GradedVectorSpace:
    """
    Finite-dimensional pieces indexed by degree.

    Labels are sorted lexicographically at construction. Degrees outside
    ``[lo, hi]`` are unknown, not zero.
    """

    bases: Mapping[int, tuple[str, ...]]
    lo: int
    hi: int
    _index: dict[int, dict[str, int]] = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def build(cls, bases: Mapping[int, Iterable[str]], lo: int, hi: int) -> GradedVectorSpace:
        clean: dict[int, tuple[str, ...]] = {}
        for n in range(lo, hi + 1):
            labels = list(bases.get(n, ()))
            if len(set(labels)) != len(labels):
                raise InvalidModel(f"duplicate basis labels in degree {n}")
            clean[n] = tuple(sorted(labels))
        space = cls(clean, lo, hi)
        for n, labels in clean.items():
            space._index[n] = {lab: i for i, lab in enumerate(labels)}
        return space

    def check_degree(self, n: int, what: str = "graded space") -> None:
        if not self.lo <= n <= self.hi:
            raise DegreeRangeExceeded(what, n, self.lo, self.hi)

    def basis(self, n: int) -> tuple[str, ...]:
        self.check_degree(n)
        return self.bases[n]

    def dim(self, n: int) -> int:
        return len(self.basis(n))

    def index(self, n: int, label: str) -> int:
        return self._index[n][label]

    def dims(self) -> dict[int, int]:
        return {n: len(b) for n, b in self.bases.items()}


@dataclass(frozen=True)
class GradedLinearMap:
    """
    Linear map raising degree by ``shift``.

    ``images[n][label]`` is the sparse image of a source basis label in
    degree ``n``. ``sign`` is the parity convention: a chain map satisfies
    ``d f = sign * f d``.
    """

    source: GradedVectorSpace
    target: GradedVectorSpace
    shift: int
    images: Mapping[int, Mapping[str, Vector]]
    lo: int
    hi: int
    sign: int = 1
    name: str = ""

    def defined(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def apply(self, n: int, v: Mapping[str, Rational]) -> Vector:
        if not v:
            return {}
        if not self.defined(n):
            raise DegreeRangeExceeded(self.name or "linear map", n, self.lo, self.hi)
        out: Vector = {}
        table = self.images.get(n, {})
        for lab, c in v.items():
            vec_axpy(out, c, table.get(lab, {}))
        return out

    def columns(self, n: int) -> list[Vector]:
        """Images of the source basis in degree ``n``, in basis order."""
        table = self.images.get(n, {}) if self.defined(n) else None
        if table is None:
            raise DegreeRangeExceeded(self.name or "linear map", n, self.lo, self.hi)
        return [dict(table.get(lab, {})) for lab in self.source.basis(n)]

    def matrix(self, n: int) -> list[list[Rational]]:
        """Dense matrix of degree ``n`` (rows: target basis, columns: source basis)."""
        tgt = self.target.basis(n + self.shift)
        cols = self.columns(n)
        return [[col.get(t, ZERO) for col in cols] for t in tgt]

    def rank(self, n: int) -> int:
        tgt = self.target.basis(n + self.shift)
        index = {t: i for i, t in enumerate(tgt)}
        rows = [{index[t]: c for t, c in col.items()} for col in self.columns(n)]
        return rank(rows, len(tgt))


@dataclass(frozen=True)
class ChainComplex:
    """Graded space with a degree -1 differential defined on ``[lo + 1, hi]``."""

    space: GradedVectorSpace
    differential: GradedLinearMap
    name: str = ""

    @classmethod
    def build(
        cls,
        bases: Mapping[int, Iterable[str]],
        images: Mapping[int, Mapping[str, Vector]],
        lo: int,
        hi: int,
        name: str = "",
        *,
        verify: bool = True,
    ) -> ChainComplex:
        space = GradedVectorSpace.build(bases, lo, hi)
        d = GradedLinearMap(space, space, -1, dict(images), lo + 1, hi, sign=-1, name=f"d[{name}]")
        complex_ = cls(space, d, name)
        if verify:
            witness = complex_.check_d_squared()
            if witness is not None:
                raise InvalidModel(f"{name}: {witness}")
        logger.debug("chain complex %s dims %s", name, space.dims())
        return complex_

    @property
    def lo(self) -> int:
        return self.space.lo

    @property
    def hi(self) -> int:
        return self.space.hi

    def basis(self, n: int) -> tuple[str, ...]:
        return self.space.basis(n)

    def dim(self, n: int) -> int:
        return self.space.dim(n)

    def d(self, n: int, v: Mapping[str, Rational]) -> Vector:
        return self.differential.apply(n, v)

    def check_d_squared(self) -> Witness | None:
        for n in range(self.lo + 2, self.hi + 1):
            for lab in self.basis(n):
                dd = self.d(n - 1, self.d(n, {lab: ONE}))
                if dd:
                    return Witness("d∘d = 0", n, lab, f"d∘d = {_fmt_vec(dd)}")
        return None


def _fmt_vec(v: Mapping[Any, Rational]) -> str:
    return " + ".join(f"{format_rational(c)}*{k}" for k, c in sorted(v.items(), key=lambda kv: _sort_key(kv[0]))) or "0"


# --------------------------------------------------------------------------- #
# Homology
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class HomologyDegree:
    degree: int
    dim: int | None
    representatives: tuple[Vector, ...]
    valid: bool
    cycles: int | None = None
    boundaries: int | None = None


@dataclass(frozen=True)
class HomologyReport:
    name: str
    lo: int
    hi: int
    degrees: Mapping[int, HomologyDegree]

    def dims(self) -> dict[int, int | None]:
        return {n: h.dim if h.valid else None for n, h in self.degrees.items()}

    def dim(self, n: int) -> int:
        h = self.degrees[n]
        if not h.valid or h.dim is None:
            raise DegreeRangeExceeded(f"H({self.name})", n, self.lo, self.hi)
        return h.dim


def _coordinate_rows(c: ChainComplex, n: int) -> tuple[list[dict[int, Rational]], int]:
    """Rows of the matrix of ``d_n`` (as sparse dicts over source indices)."""
    tgt = c.basis(n - 1)
    index = {t: i for i, t in enumerate(tgt)}
    rows: list[dict[int, Rational]] = [{} for _ in tgt]
    for j, col in enumerate(c.differential.columns(n)):
        for t, x in col.items():
            rows[index[t]][j] = x
    return rows, len(c.basis(n))


def cycles(c: ChainComplex, n: int) -> list[Vector]:
    """Basis of ker(d_n) as label vectors."""
    src = c.basis(n)
    if n - 1 < c.lo:
        raise DegreeRangeExceeded(f"cycles of {c.name}", n, c.lo + 1, c.hi)
    rows, ncols = _coordinate_rows(c, n)
    return [{src[j]: x for j, x in v.items()} for v in sparse_kernel(rows, ncols)]


def boundaries(c: ChainComplex, n: int) -> list[Vector]:
    """Images of the degree ``n + 1`` basis (a spanning set of im d)."""
    if n + 1 > c.hi:
        raise DegreeRangeExceeded(f"boundaries of {c.name}", n, c.lo, c.hi - 1)
    return [v for v in c.differential.columns(n + 1) if v]


def _homology_degree(c: ChainComplex, n: int) -> HomologyDegree:
    z = cycles(c, n)
    b = boundaries(c, n)
    picked = independent_indices(b + z)
    nb = sum(1 for i in picked if i < len(b))
    reps = tuple(z[i - len(b)] for i in picked if i >= len(b))
    return HomologyDegree(n, len(z) - nb, reps, True, len(z), nb)


def homology(c: ChainComplex, lo: int, hi: int, *, strict: bool = True) -> HomologyReport:
    """
    Exact homology of ``c`` in degrees ``[lo, hi]``.

    With ``strict`` the complex must be known on ``[lo - 1, hi + 1]``;
    otherwise degrees lacking adjacent data are reported invalid.
    """
    if strict and (lo - 1 < c.lo or hi + 1 > c.hi):
        bad = lo - 1 if lo - 1 < c.lo else hi + 1
        raise DegreeRangeExceeded(f"homology of {c.name}", bad, c.lo, c.hi)
    degrees: dict[int, HomologyDegree] = {}
    for n in range(lo, hi + 1):
        if n - 1 < c.lo or n + 1 > c.hi:
            degrees[n] = HomologyDegree(n, None, (), False)
            continue
        degrees[n] = _homology_degree(c, n)
    logger.debug("H(%s) = %s", c.name, {n: h.dim for n, h in degrees.items()})
    return HomologyReport(c.name, lo, hi, degrees)


# --------------------------------------------------------------------------- #
# Chain maps
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class Verdict:
    """Outcome of an exact check; a ``truncated`` check stopped at its sample limit."""

    ok: bool
    witness: Witness | None = None
    truncated: bool = False

    def __bool__(self) -> bool:
        return self.ok and not self.truncated


_END = object()


class Sampler:
    """
    Feeds cases to an exact check, at most ``limit`` per batch.

    ``limit=None`` visits every case. A batch cut short marks the check
    ``truncated``; such a check never reports a pass.
    """

    def __init__(self, limit: int | None = None):
        self.limit = limit
        self.count = 0
        self.truncated = False

    def take(self, cases: Iterable[T]) -> Iterator[T]:
        it = iter(cases)
        for case in it if self.limit is None else islice(it, self.limit):
            self.count += 1
            yield case
        if self.limit is not None and next(it, _END) is not _END:
            self.truncated = True

    def verdict(self, witness: Witness | None = None) -> Verdict:
        if witness is not None:
            return Verdict(False, witness)
        return Verdict(True, None, self.truncated)


def _map_range(
    f: GradedLinearMap, src: ChainComplex, tgt: ChainComplex, lo: int | None, hi: int | None
) -> tuple[int, int]:
    safe_lo = max(f.lo + 1, src.lo + 1, tgt.lo + 1 - f.shift)
    safe_hi = min(f.hi, src.hi, tgt.hi - f.shift)
    first = safe_lo if lo is None else lo
    last = safe_hi if hi is None else hi
    if first < safe_lo:
        raise DegreeRangeExceeded(f.name or "chain map", first, safe_lo, safe_hi)
    if last > safe_hi:
        raise DegreeRangeExceeded(f.name or "chain map", last, safe_lo, safe_hi)
    return first, last


def verify_chain_map(
    f: GradedLinearMap,
    src: ChainComplex,
    tgt: ChainComplex,
    lo: int | None = None,
    hi: int | None = None,
) -> Verdict:
    """Check ``d f = sign * f d`` on every basis label of degrees ``[lo, hi]``."""
    first, last = _map_range(f, src, tgt, lo, hi)
    for n in range(first, last + 1):
        for lab in src.basis(n):
            e = {lab: ONE}
            lhs = tgt.d(n + f.shift, f.apply(n, e))
            rhs = vec_scale(q(f.sign), f.apply(n - 1, src.d(n, e)))
            diff = vec_sub(lhs, rhs)
            if diff:
                return Verdict(False, Witness("d∘f = ±f∘d", n, lab, _fmt_vec(diff)))
    return Verdict(True)


@dataclass(frozen=True)
class InducedMap:
    """Matrices of H(f) in the chosen homology bases, per source degree."""

    shift: int
    matrices: Mapping[int, list[list[Rational]]]
    iso: Mapping[int, bool]

    @property
    def is_quasi_isomorphism(self) -> bool:
        return all(self.iso.values())


def induced_map_on_homology(
    f: GradedLinearMap,
    src: ChainComplex,
    tgt: ChainComplex,
    lo: int,
    hi: int,
) -> InducedMap:
    """H(f) on source degrees ``[lo, hi]`` with an iso verdict per degree."""
    safe_lo, safe_hi = _map_range(f, src, tgt, None, None)
    verdict = verify_chain_map(f, src, tgt, max(lo, safe_lo), min(hi + 1, safe_hi))
    if not verdict:
        raise NotAChainMap(f"{f.name or 'map'} is not a chain map", verdict.witness)
    h_src = homology(src, lo, hi)
    h_tgt = homology(tgt, lo + f.shift, hi + f.shift)
    matrices: dict[int, list[list[Rational]]] = {}
    iso: dict[int, bool] = {}
    for n in range(lo, hi + 1):
        reps = h_src.degrees[n].representatives
        t_reps = list(h_tgt.degrees[n + f.shift].representatives)
        bnd = boundaries(tgt, n + f.shift)
        span = SpanBasis(bnd + t_reps)
        offset = len(span) - len(t_reps)
        cols = [span.coordinates(f.apply(n, z))[offset:] for z in reps]
        mat = [[col[i] for col in cols] for i in range(len(t_reps))]
        matrices[n] = mat
        if len(reps) != len(t_reps):
            iso[n] = False
        elif not reps:
            iso[n] = True
        else:
            rows = [{j: x for j, x in enumerate(r) if x} for r in mat]
            iso[n] = rank(rows, len(reps)) == len(reps)
    return InducedMap(f.shift, matrices, iso)


# --------------------------------------------------------------------------- #
# Builders
# --------------------------------------------------------------------------- #


def identity_map(c: ChainComplex) -> GradedLinearMap:
    images = {n: {lab: {lab: ONE} for lab in c.basis(n)} for n in range(c.lo, c.hi + 1)}
    return GradedLinearMap(c.space, c.space, 0, images, c.lo, c.hi, sign=1, name=f"id[{c.name}]")


def zero_map(src: ChainComplex, tgt: ChainComplex, shift: int = 0) -> GradedLinearMap:
    lo = max(src.lo, tgt.lo - shift)
    hi = min(src.hi, tgt.hi - shift)
    images: dict[int, dict[str, Vector]] = {n: {} for n in range(lo, hi + 1)}
    return GradedLinearMap(src.space, tgt.space, shift, images, lo, hi, sign=(-1) ** shift, name="0")


def mapping_cone(f: GradedLinearMap, src: ChainComplex, tgt: ChainComplex, name: str = "") -> ChainComplex:
    """
    Cone of a degree-0 chain map: ``tgt_n ⊕ s src_{n-1}`` with
    ``d(b, sa) = (d b - f(a), -s d a)``.
    """
    if f.shift != 0:
        raise NotAChainMap("mapping cones are built for degree-0 maps only")
    lo = max(tgt.lo, src.lo + 1, f.lo + 1)
    hi = min(tgt.hi, src.hi + 1, f.hi + 1)
    bases: dict[int, list[str]] = {}
    images: dict[int, dict[str, Vector]] = {}
    for n in range(lo, hi + 1):
        bases[n] = [f"t:{b}" for b in tgt.basis(n)] + [f"s:{a}" for a in src.basis(n - 1)]
        if n == lo:
            continue
        table: dict[str, Vector] = {}
        for b in tgt.basis(n):
            table[f"t:{b}"] = {f"t:{k}": x for k, x in tgt.d(n, {b: ONE}).items()}
        for a in src.basis(n - 1):
            out: Vector = {f"t:{k}": -x for k, x in f.apply(n - 1, {a: ONE}).items()}
            for k, x in src.d(n - 1, {a: ONE}).items():
                out[f"s:{k}"] = -x
            table[f"s:{a}"] = out
        images[n] = table
    return ChainComplex.build(bases, images, lo, hi, name or f"cone({f.name})")


@dataclass(frozen=True)
class Subcomplex:
    """A subcomplex together with its inclusion into the ambient complex."""

    complex: ChainComplex
    inclusion: GradedLinearMap
    vectors: Mapping[int, tuple[Vector, ...]]


def subcomplex(
    ambient: ChainComplex,
    subspaces: Mapping[int, Sequence[Vector] | None],
    lo: int,
    hi: int,
    name: str,
) -> Subcomplex:
    """
    Subcomplex with given per-degree subspaces (``None`` keeps the whole
    degree). Raises NotInSpan when the differential leaves the subspace.
    """
    vectors: dict[int, tuple[Vector, ...]] = {}
    labels: dict[int, list[str]] = {}
    spans: dict[int, SpanBasis] = {}
    for n in range(lo, hi + 1):
        sub = subspaces.get(n)
        if sub is None:
            vectors[n] = tuple({lab: ONE} for lab in ambient.basis(n))
            labels[n] = list(ambient.basis(n))
        else:
            span = SpanBasis(list(sub))
            spans[n] = span
            vectors[n] = span.vectors
            labels[n] = [f"z{i:04d}" for i in range(len(span))]
    images: dict[int, dict[str, Vector]] = {}
    for n in range(lo + 1, hi + 1):
        table: dict[str, Vector] = {}
        for lab, v in zip(labels[n], vectors[n]):
            dv = ambient.d(n, v)
            if n - 1 in spans:
                coords = spans[n - 1].coordinates(dv)
                table[lab] = {labels[n - 1][i]: x for i, x in enumerate(coords) if x}
            else:
                table[lab] = dv
        images[n] = table
    sub_complex = ChainComplex.build(labels, images, lo, hi, name)
    incl_images = {
        n: {lab: dict(v) for lab, v in zip(labels[n], vectors[n])} for n in range(lo, hi + 1)
    }
    inclusion = GradedLinearMap(
        sub_complex.space, ambient.space, 0, incl_images, lo, hi, sign=1, name=f"incl[{name}]"
    )
    return Subcomplex(sub_complex, inclusion, vectors)


def connected_cover(c: ChainComplex, n: int) -> Subcomplex:
    """
    The ``n``-connected cover: everything above ``n``, the cycles in degree
    ``n`` and zero below.
    """
    if n - 1 < c.lo:
        raise DegreeRangeExceeded(f"cover of {c.name}", n - 1, c.lo, c.hi)
    subspaces: dict[int, Sequence[Vector] | None] = {n - 1: [], n: cycles(c, n)}
    return subcomplex(c, subspaces, n - 1, c.hi, f"{c.name}<{n}>")


def direct_sum(parts: Sequence[tuple[str, ChainComplex]], name: str) -> ChainComplex:
    lo = max(c.lo for _, c in parts)
    hi = min(c.hi for _, c in parts)
    bases = {n: [f"{p}:{b}" for p, c in parts for b in c.basis(n)] for n in range(lo, hi + 1)}
    images: dict[int, dict[str, Vector]] = {}
    for n in range(lo + 1, hi + 1):
        table: dict[str, Vector] = {}
        for p, c in parts:
            for b in c.basis(n):
                table[f"{p}:{b}"] = {f"{p}:{k}": x for k, x in c.d(n, {b: ONE}).items()}
        images[n] = table
    return ChainComplex.build(bases, images, lo, hi, name)
