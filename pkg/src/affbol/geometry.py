"""Linear, affine and projective subspaces of F_q^n in canonical form.

A linear subspace is stored by its RREF basis, so equal subspaces have equal
representations.  An affine subspace (coset) is stored as its direction plus
a base point whose entries on the direction's pivot columns are zero; this
picks one distinguished representative per coset.

Points of F_q^n are indexed in base q with coordinate 1 least significant.
"""

from __future__ import annotations

import functools
import itertools
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from . import algebra
from .algebra import FieldDesc, Mat, Vec, fq_make
from .errors import BudgetExceeded, DimensionMismatch

DEFAULT_POINT_BUDGET = 2**24
DEFAULT_ENUM_CAP = 10**6


def point_budget() -> int:
    """Cap on q**n; the AFFBOL_BUDGET environment variable overrides it."""
    env = os.environ.get("AFFBOL_BUDGET")
    return int(env) if env else DEFAULT_POINT_BUDGET


@dataclass(frozen=True)
class SpaceDesc:
    field: FieldDesc
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DimensionMismatch(f"ambient dimension must be >= 1, got {self.n}")
        if self.field.q ** self.n > point_budget():
            raise BudgetExceeded(
                f"F_{self.field.q}^{self.n} has {self.field.q ** self.n} points, "
                f"above the budget {point_budget()} (set AFFBOL_BUDGET to raise it)")

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def size(self) -> int:
        return self.field.q ** self.n

    def zero(self) -> Vec:
        return (0,) * self.n


def make_space(n: int, q: int) -> SpaceDesc:
    return SpaceDesc(fq_make(q), n)


def _same_space(*spaces: SpaceDesc) -> None:
    first = spaces[0]
    for s in spaces[1:]:
        if s != first:
            raise DimensionMismatch(f"objects live in different spaces: {first} vs {s}")


def _check_vec(space: SpaceDesc, v: Sequence[int]) -> Vec:
    if len(v) != space.n:
        raise DimensionMismatch(f"vector of length {len(v)} in a space of dimension {space.n}")
    q = space.q
    if any(not (0 <= x < q) for x in v):
        raise DimensionMismatch(f"vector {tuple(v)} has entries outside F_{q}")
    return tuple(v)


# ---------------------------------------------------------------------------
# point indexing


def point_index(space: SpaceDesc, v: Sequence[int]) -> int:
    q = space.q
    idx = 0
    for x in reversed(v):
        idx = idx * q + x
    return idx


def point_unindex(space: SpaceDesc, idx: int) -> Vec:
    q = space.q
    out = []
    for _ in range(space.n):
        idx, d = divmod(idx, q)
        out.append(d)
    return tuple(out)


@functools.lru_cache(maxsize=64)
def all_points(space: SpaceDesc) -> tuple[Vec, ...]:
    """Every point, in point_index order."""
    return tuple(point_unindex(space, i) for i in range(space.size))


# ---------------------------------------------------------------------------
# linear subspaces


@dataclass(frozen=True)
class LinearSubspace:
    space: SpaceDesc
    basis: Mat

    @property
    def dim(self) -> int:
        return len(self.basis)

    @functools.cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.basis)

    def reduce(self, v: Sequence[int]) -> Vec:
        """Residue of ``v`` modulo the subspace; zero on every pivot column."""
        F = self.space.field
        v = tuple(v)
        for row, pc in zip(self.basis, self.pivots):
            c = v[pc]
            if c:
                v = algebra.vec_sub(F, v, algebra.vec_scale(F, c, row))
        return v

    def __contains__(self, v) -> bool:
        return not any(self.reduce(v))

    def vectors(self) -> Iterator[Vec]:
        F = self.space.field
        for coeffs in itertools.product(range(F.q), repeat=self.dim):
            yield algebra.vec_mat(F, coeffs, self.basis, self.space.n)


def linear_span(space: SpaceDesc, vectors: Iterable[Sequence[int]]) -> LinearSubspace:
    rows = tuple(_check_vec(space, v) for v in vectors)
    basis = algebra.row_basis(space.field, rows, space.n) if rows else ()
    return LinearSubspace(space, basis)


def zero_subspace(space: SpaceDesc) -> LinearSubspace:
    return LinearSubspace(space, ())


def linear_sum(U: LinearSubspace, V: LinearSubspace) -> LinearSubspace:
    _same_space(U.space, V.space)
    return LinearSubspace(U.space, algebra.subspace_sum(U.space.field, U.basis, V.basis, U.space.n))


def linear_intersection(U: LinearSubspace, V: LinearSubspace) -> LinearSubspace:
    _same_space(U.space, V.space)
    return LinearSubspace(
        U.space, algebra.subspace_intersection(U.space.field, U.basis, V.basis, U.space.n))


def intersection_dim(U: LinearSubspace, V: LinearSubspace) -> int:
    """dim(U ∩ V) via the rank identity dim U + dim V - dim(U + V)."""
    return U.dim + V.dim - linear_sum(U, V).dim


# ---------------------------------------------------------------------------
# affine subspaces


@dataclass(frozen=True)
class AffineSubspace:
    space: SpaceDesc
    direction: LinearSubspace
    base: Vec

    @property
    def dim(self) -> int:
        return self.direction.dim

    @property
    def size(self) -> int:
        return self.space.q ** self.direction.dim

    def __contains__(self, v) -> bool:
        return self.direction.reduce(v) == self.base

    def points(self) -> Iterator[Vec]:
        F = self.space.field
        for u in self.direction.vectors():
            yield algebra.vec_add(F, self.base, u)

    @functools.cached_property
    def mask(self) -> int:
        """Point set as a bitmask over point indices."""
        out = 0
        for v in self.points():
            out |= 1 << point_index(self.space, v)
        return out

    def translate(self, alpha: Sequence[int]) -> "AffineSubspace":
        F = self.space.field
        return AffineSubspace(self.space, self.direction,
                              self.direction.reduce(algebra.vec_add(F, self.base, alpha)))


def affine_canon(space: SpaceDesc, direction_basis: Sequence[Sequence[int]],
                 point: Sequence[int]) -> AffineSubspace:
    """Canonical coset ``point + rowspace(direction_basis)``."""
    direction = linear_span(space, direction_basis)
    point = _check_vec(space, point)
    return AffineSubspace(space, direction, direction.reduce(point))


def coset_of(U: LinearSubspace, point: Sequence[int] = None) -> AffineSubspace:
    point = U.space.zero() if point is None else _check_vec(U.space, point)
    return AffineSubspace(U.space, U, U.reduce(point))


@dataclass(frozen=True)
class IntersectionResult:
    kind: str  # "Empty" or "Coset"
    coset: Optional[AffineSubspace] = None
    t: Optional[int] = None

    @property
    def empty(self) -> bool:
        return self.kind == "Empty"

    @property
    def size(self) -> int:
        return 0 if self.empty else self.coset.size


EMPTY = IntersectionResult("Empty")


def affine_intersect(A: AffineSubspace, B: AffineSubspace) -> IntersectionResult:
    """Intersect two cosets; nonempty exactly when base(B) - base(A) lies in dir A + dir B."""
    _same_space(A.space, B.space)
    space, F, n = A.space, A.space.field, A.space.n
    UA, UB = A.direction.basis, B.direction.basis
    d = algebra.vec_sub(F, B.base, A.base)
    stacked = UA + UB
    if not stacked:
        if any(d):
            return EMPTY
        return IntersectionResult("Coset", A, 0)
    x, _ = algebra.solve_affine(F, algebra.transpose(stacked, n), d, len(stacked))
    if x is None:
        return EMPTY
    point = algebra.vec_add(F, A.base, algebra.vec_mat(F, x[: len(UA)], UA, n))
    direction = linear_intersection(A.direction, B.direction)
    return IntersectionResult("Coset", AffineSubspace(space, direction, direction.reduce(point)),
                              direction.dim)


def minkowski_member(alpha: Sequence[int], F_: AffineSubspace, G: AffineSubspace) -> bool:
    """Whether ``alpha`` lies in the Minkowski difference ``F_ - G``."""
    _same_space(F_.space, G.space)
    alpha = _check_vec(F_.space, alpha)
    K = F_.space.field
    offset = algebra.vec_sub(K, alpha, algebra.vec_sub(K, F_.base, G.base))
    return offset in linear_sum(F_.direction, G.direction)


# ---------------------------------------------------------------------------
# enumeration


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional linear subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def affine_count(n: int, d: int, q: int) -> int:
    return gaussian_binomial(n, d, q) * q ** (n - d)


def enumerate_linear_subspaces(space: SpaceDesc, d: int) -> list[LinearSubspace]:
    """All d-dimensional subspaces, sorted by RREF basis."""
    n, q = space.n, space.q
    out = []
    for pivots in itertools.combinations(range(n), d):
        free = [(i, j) for i, pc in enumerate(pivots) for j in range(pc + 1, n)
                if j not in pivots]
        for vals in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(d)]
            for i, pc in enumerate(pivots):
                rows[i][pc] = 1
            for (i, j), v in zip(free, vals):
                rows[i][j] = v
            out.append(LinearSubspace(space, tuple(tuple(r) for r in rows)))
    out.sort(key=lambda U: U.basis)
    return out


def _check_dims(space: SpaceDesc, dims: Optional[Iterable[int]]) -> list[int]:
    if dims is None:
        return list(range(space.n + 1))
    dims = sorted(set(dims))
    bad = [d for d in dims if not 0 <= d <= space.n]
    if bad:
        raise DimensionMismatch(f"dimensions {bad} outside 0..{space.n}")
    return dims


def enumerate_affine_subspaces(space: SpaceDesc, dims: Optional[Iterable[int]] = None,
                               cap: int = DEFAULT_ENUM_CAP) -> list[AffineSubspace]:
    """Every coset with dimension in ``dims``, once each.

    Order: by dimension, then RREF direction basis, then base point, all
    compared lexicographically as integer tuples.
    """
    dims = _check_dims(space, dims)
    total = sum(affine_count(space.n, d, space.q) for d in dims)
    if total > cap:
        raise BudgetExceeded(f"{total} affine subspaces exceed the enumeration cap {cap}")
    out = []
    for d in dims:
        for U in enumerate_linear_subspaces(space, d):
            free = [j for j in range(space.n) if j not in U.pivots]
            cosets = []
            for vals in itertools.product(range(space.q), repeat=len(free)):
                base = [0] * space.n
                for j, v in zip(free, vals):
                    base[j] = v
                cosets.append(AffineSubspace(space, U, tuple(base)))
            cosets.sort(key=lambda A: A.base)
            out.extend(cosets)
    return out


def hyperplane_normals(space: SpaceDesc) -> list[Vec]:
    """Normals whose first nonzero coordinate is 1, lexicographically sorted."""
    n, q = space.n, space.q
    out = []
    for lead in range(n):
        for tail in itertools.product(range(q), repeat=n - lead - 1):
            out.append((0,) * lead + (1,) + tail)
    out.sort()
    return out


def enumerate_linear_hyperplanes(space: SpaceDesc) -> list[LinearSubspace]:
    F, n = space.field, space.n
    return [LinearSubspace(space, algebra.kernel(F, (a,), n)) for a in hyperplane_normals(space)]


# ---------------------------------------------------------------------------
# projective subspaces


def projective_space(n: int, q: int) -> SpaceDesc:
    """Homogeneous coordinate space F_q^(n+1) of PG(n, q)."""
    return make_space(n + 1, q)


@dataclass(frozen=True)
class ProjectiveSubspace:
    space: SpaceDesc
    carrier: LinearSubspace

    def __post_init__(self):
        if self.carrier.dim < 1:
            raise DimensionMismatch("a projective subspace needs a carrier of dimension >= 1")

    @property
    def dim(self) -> int:
        return self.carrier.dim - 1

    @functools.cached_property
    def mask(self) -> int:
        """Projective points as a bitmask over normalized representatives' indices."""
        out = 0
        for v in self.carrier.vectors():
            if any(v) and next(x for x in v if x) == 1:
                out |= 1 << point_index(self.space, v)
        return out


def projective_span(space: SpaceDesc, vectors: Iterable[Sequence[int]]) -> ProjectiveSubspace:
    return ProjectiveSubspace(space, linear_span(space, vectors))


def projective_disjoint(P: ProjectiveSubspace, Q: ProjectiveSubspace) -> bool:
    _same_space(P.space, Q.space)
    return P.carrier.dim + Q.carrier.dim == linear_sum(P.carrier, Q.carrier).dim


def enumerate_projective_subspaces(space: SpaceDesc, dims: Optional[Iterable[int]] = None,
                                   cap: int = DEFAULT_ENUM_CAP) -> list[ProjectiveSubspace]:
    """Projective subspaces of PG(space.n - 1, q) with projective dimension in ``dims``."""
    pn = space.n - 1
    dims = list(range(pn + 1)) if dims is None else sorted(set(dims))
    bad = [d for d in dims if not 0 <= d <= pn]
    if bad:
        raise DimensionMismatch(f"projective dimensions {bad} outside 0..{pn}")
    total = sum(gaussian_binomial(space.n, d + 1, space.q) for d in dims)
    if total > cap:
        raise BudgetExceeded(f"{total} projective subspaces exceed the enumeration cap {cap}")
    return [ProjectiveSubspace(space, U) for d in dims
            for U in enumerate_linear_subspaces(space, d + 1)]
