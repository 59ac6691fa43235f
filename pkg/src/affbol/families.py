"""Ordered set-pair families and their cross-intersection verifiers.

A family is an ordered list of pairs ``(A_i, B_i)``.  In *skew* mode it is
cross-intersecting when every ``A_i`` misses ``B_i`` and ``A_i`` meets
``B_j`` for all ``i < j``.  *Symmetric* mode instead demands that ``A_i``
and ``B_j`` are disjoint exactly when ``i == j``.

"Disjoint" depends on the geometry: plain sets and cosets must share no
point, linear subspaces must meet only in 0, projective subspaces must have
carriers meeting only in 0.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Sequence, Union

from . import geometry as geo
from .errors import ContextMismatch, InternalInconsistency, NotVerified

GEOMETRIES = ("sets", "linear", "affine", "projective")
MODES = ("skew", "symmetric")


@dataclass(frozen=True)
class SetPairFamily:
    geometry: str
    context: Union[geo.SpaceDesc, int]
    pairs: tuple[tuple[Any, Any], ...]
    mode: str = "skew"

    def __post_init__(self):
        if self.geometry not in GEOMETRIES:
            raise ValueError(f"unknown geometry {self.geometry!r}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "pairs", tuple((a, b) for a, b in self.pairs))

    @property
    def m(self) -> int:
        return len(self.pairs)

    def with_mode(self, mode: str) -> "SetPairFamily":
        return SetPairFamily(self.geometry, self.context, self.pairs, mode)


@dataclass(frozen=True)
class Violation:
    kind: str  # "DiagonalNonempty" or "OffDiagonalEmpty"
    i: int     # 1-based
    j: int
    witness: Any = None


def _check_member(fam: SetPairFamily, X) -> None:
    g, ctx = fam.geometry, fam.context
    if g == "sets":
        if not isinstance(X, frozenset) or any(not (1 <= x <= ctx) for x in X):
            raise ContextMismatch(f"{X!r} is not a subset of the ground set 1..{ctx}")
        return
    expected = {"linear": geo.LinearSubspace, "affine": geo.AffineSubspace,
                "projective": geo.ProjectiveSubspace}[g]
    if not isinstance(X, expected) or X.space != ctx:
        raise ContextMismatch(f"pair member {X!r} does not belong to {ctx}")


def meet(geometry: str, X, Y) -> tuple[bool, Any]:
    """``(intersects, witness)`` for one ordered test in the given geometry."""
    if geometry == "sets":
        common = X & Y
        return bool(common), (min(common) if common else None)
    if geometry == "affine":
        res = geo.affine_intersect(X, Y)
        return (not res.empty), (None if res.empty else res.coset.base)
    if geometry == "linear":
        common = geo.linear_intersection(X, Y)
        return common.dim > 0, (common.basis[0] if common.dim else None)
    if geometry == "projective":
        common = geo.linear_intersection(X.carrier, Y.carrier)
        return common.dim > 0, (common.basis[0] if common.dim else None)
    raise ValueError(f"unknown geometry {geometry!r}")


def verify_cross_intersecting(fam: SetPairFamily) -> list[Violation]:
    """Every violation of the family's mode, sorted by ``(i, j)``; empty means verified."""
    for a, b in fam.pairs:
        _check_member(fam, a)
        _check_member(fam, b)
    out = []
    m = fam.m
    for i, j in itertools.product(range(m), repeat=2):
        if i != j and fam.mode == "skew" and i > j:
            continue
        hit, witness = meet(fam.geometry, fam.pairs[i][0], fam.pairs[j][1])
        if i == j and hit:
            out.append(Violation("DiagonalNonempty", i + 1, j + 1, witness))
        elif i != j and not hit:
            out.append(Violation("OffDiagonalEmpty", i + 1, j + 1))
    return out


def bollobas_sum(fam: SetPairFamily) -> Fraction:
    """Exact value of sum_i 1 / C(|A_i| + |B_i|, |A_i|) for a symmetric set family."""
    if fam.geometry != "sets":
        raise NotVerified("the Bollobas sum is defined for plain set families only")
    bad = verify_cross_intersecting(fam.with_mode("symmetric"))
    if bad:
        raise NotVerified(f"family violates the symmetric condition ({len(bad)} violations)")
    return sum((Fraction(1, math.comb(len(a) + len(b), len(a))) for a, b in fam.pairs),
               Fraction(0))


def uniform_bound(r: int, s: int) -> int:
    return math.comb(r + s, r)


def tight_set_family(r: int, s: int) -> SetPairFamily:
    """All r-subsets of {1..r+s} paired with their complements."""
    ground = frozenset(range(1, r + s + 1))
    pairs = [(frozenset(S), ground - frozenset(S))
             for S in itertools.combinations(sorted(ground), r)]
    return SetPairFamily("sets", r + s, tuple(pairs), "symmetric")


# ---------------------------------------------------------------------------
# uniform linear families


@dataclass(frozen=True)
class LinearPairFamily:
    space: geo.SpaceDesc
    pairs: tuple[tuple[geo.LinearSubspace, geo.LinearSubspace], ...]

    @property
    def m(self) -> int:
        return len(self.pairs)

    @property
    def uniform(self) -> Optional[tuple[int, int]]:
        """``(r, s)`` when every U_i has dim r and every V_i dim s, else None."""
        if not self.pairs:
            return None
        dims = {(u.dim, v.dim) for u, v in self.pairs}
        return next(iter(dims)) if len(dims) == 1 else None


def verify_linear_pairs(fam: LinearPairFamily) -> list[Violation]:
    for u, v in fam.pairs:
        for X in (u, v):
            if X.space != fam.space:
                raise ContextMismatch(f"subspace {X!r} does not belong to {fam.space}")
    out = []
    for i, j in itertools.combinations_with_replacement(range(fam.m), 2):
        d = geo.intersection_dim(fam.pairs[i][0], fam.pairs[j][1])
        if i == j and d > 0:
            w = geo.linear_intersection(fam.pairs[i][0], fam.pairs[j][1]).basis[0]
            out.append(Violation("DiagonalNonempty", i + 1, j + 1, w))
        elif i < j and d == 0:
            out.append(Violation("OffDiagonalEmpty", i + 1, j + 1))
    rs = fam.uniform
    if not out and rs is not None and fam.m > uniform_bound(*rs):
        raise InternalInconsistency(
            f"verified uniform linear family of size {fam.m} exceeds C(r+s, r) = "
            f"{uniform_bound(*rs)}")
    return out


def coordinate_linear_family(space: geo.SpaceDesc, r: int) -> LinearPairFamily:
    """U_S = span(e_k : k in S), V_S = span(e_k : k not in S) over all r-subsets S."""
    n = space.n
    unit = [tuple(int(k == j) for k in range(n)) for j in range(n)]
    pairs = []
    for S in itertools.combinations(range(n), r):
        rest = [k for k in range(n) if k not in S]
        pairs.append((geo.linear_span(space, [unit[k] for k in S]),
                      geo.linear_span(space, [unit[k] for k in rest])))
    return LinearPairFamily(space, tuple(pairs))


def as_linear_family(fam: SetPairFamily) -> LinearPairFamily:
    if fam.geometry != "linear":
        raise ContextMismatch("family is not over linear subspaces")
    return LinearPairFamily(fam.context, fam.pairs)
