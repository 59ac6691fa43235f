"""Checkable linear-algebra certificate for the bound m <= q^n + 1.

Fix a prime p dividing q - 1.  Pair i of a skew cross-intersecting affine
family gets the degree-one polynomial

    P_i(x) = 1 - sum_k v_i(k) x_k   over F_p,

where v_i is the characteristic vector of A_i.  Evaluated at the
characteristic vector w_j of B_j this is 1 - |A_i ∩ B_j| mod p.  Diagonal
values are 1 (the pair is disjoint) and values above the diagonal vanish
because a nonempty intersection has q^t points and q = 1 mod p.  A unit
upper-triangular evaluation matrix makes the P_i linearly independent, and
they live in a space of dimension q^n + 1.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import algebra
from . import geometry as geo
from . import kernels
from .errors import (BudgetExceeded, ContextMismatch, InternalInconsistency, InvalidP,
                     NotVerified, QEqualsTwo)
from .families import SetPairFamily, verify_cross_intersecting


def smallest_odd_p(q: int) -> int:
    """Smallest prime dividing q - 1.

    Despite the name this is 2 whenever q is odd; only the q = 2 case, where
    q - 1 = 1 has no prime divisor, is rejected.
    """
    if q == 2:
        raise QEqualsTwo("q = 2: q - 1 has no prime divisor, the bound does not apply")
    if q < 2:
        raise ValueError(f"q must be a prime power >= 3, got {q}")
    return algebra.prime_factors(q - 1)[0]


@dataclass(frozen=True)
class CharVector:
    space: geo.SpaceDesc
    words: np.ndarray  # packed little-endian bitset, one uint64 per 64 points

    @property
    def bits(self) -> np.ndarray:
        raw = np.unpackbits(self.words.view(np.uint8), bitorder="little")
        return raw[: self.space.size]

    @property
    def popcount(self) -> int:
        return int(np.bitwise_count(self.words).sum())


@functools.lru_cache(maxsize=16)
def _point_array(space: geo.SpaceDesc) -> np.ndarray:
    """All points as a (q^n, n) array, rows in point_index order."""
    idx = np.arange(space.size, dtype=np.int64)
    return np.stack([(idx // space.q**k) % space.q for k in range(space.n)], axis=1)


def _pack(bits: np.ndarray) -> np.ndarray:
    nwords = max(1, (len(bits) + 63) // 64)
    padded = np.zeros(nwords * 64, dtype=np.uint8)
    padded[: len(bits)] = bits
    return np.packbits(padded, bitorder="little").view("<u8").copy()


def char_vector(S: geo.AffineSubspace) -> CharVector:
    """Characteristic vector of a coset, computed from its defining equations."""
    space = S.space
    if space.size > geo.point_budget():
        raise BudgetExceeded(f"{space.size} points exceed the budget {geo.point_budget()}")
    F, n = space.field, space.n
    add, mul, _ = F.tables()
    pts = _point_array(space)
    member = np.ones(space.size, dtype=bool)
    for y in algebra.kernel(F, S.direction.basis, n):
        acc = np.zeros(space.size, dtype=np.int64)
        for k, yk in enumerate(y):
            if yk:
                acc = add[acc, mul[yk, pts[:, k]]]
        member &= acc == algebra.dot(F, y, S.base)
    return CharVector(space, _pack(member.astype(np.uint8)))


@dataclass(frozen=True)
class CertificateRow:
    """Coefficients of P_i: constant term first, then one per point."""

    index: int
    coefficients: np.ndarray
    p: int

    def evaluate(self, w: CharVector) -> int:
        x = np.concatenate(([1], w.bits.astype(np.int64)))
        return int(self.coefficients @ x % self.p)


def certificate_rows(fam: SetPairFamily, p: int) -> list[CertificateRow]:
    rows = []
    for i, (A, _) in enumerate(fam.pairs, start=1):
        v = char_vector(A).bits.astype(np.int64)
        rows.append(CertificateRow(i, np.concatenate(([1], (-v) % p)), p))
    return rows


def rank_crosscheck(rows: list[CertificateRow], p: int) -> int:
    """Rank over F_p of the stacked coefficient vectors."""
    if not rows:
        return 0
    return algebra.rank_mod_p(np.stack([r.coefficients for r in rows]), p)


@dataclass(frozen=True)
class EvalCertificate:
    p: int
    q: int
    n: int
    m: int
    E: np.ndarray  # E[i, j] = (1 - |A_i ∩ B_j|) mod p
    valid: bool
    implied_bound: int
    rank: int

    def to_json(self, max_matrix: int = 64) -> dict:
        out = {
            "p": self.p, "q": self.q, "n": self.n, "m": self.m,
            "valid": self.valid, "implied_bound": self.implied_bound, "rank": self.rank,
            "bound_holds": self.m <= self.implied_bound,
        }
        if self.m <= max_matrix:
            out["E"] = self.E.tolist()
        return out


def _check_p(q: int, p: int) -> None:
    if not algebra.is_prime(p) or (q - 1) % p:
        raise InvalidP(f"p = {p} is not a prime divisor of q - 1 = {q - 1}")


def is_triangular_certificate(E: np.ndarray) -> bool:
    """Unit diagonal and zeros strictly above it."""
    m = E.shape[0]
    return bool(np.all(np.diag(E) == 1) and not np.triu(E, 1).any()) if m else True


def build_certificate(fam: SetPairFamily, p: int | None = None) -> EvalCertificate:
    if fam.geometry != "affine":
        raise ContextMismatch("certificates are defined for affine families")
    space = fam.context
    q, n = space.q, space.n
    if q == 2:
        raise QEqualsTwo("q = 2: no prime divides q - 1, the bound does not apply")
    p = smallest_odd_p(q) if p is None else p
    _check_p(q, p)
    bad = verify_cross_intersecting(fam.with_mode("skew"))
    if bad:
        raise NotVerified(f"family is not skew cross-intersecting ({len(bad)} violations)")

    m = fam.m
    if m:
        A = np.stack([char_vector(a).words for a, _ in fam.pairs])
        B = np.stack([char_vector(b).words for _, b in fam.pairs])
        E = (1 - kernels.and_popcount_matrix(A, B)) % p
    else:
        E = np.zeros((0, 0), dtype=np.int64)
    valid = is_triangular_certificate(E)
    rank = rank_crosscheck(certificate_rows(fam, p), p)
    bound = q**n + 1
    if valid and (rank != m or m > bound):
        raise InternalInconsistency(
            f"valid certificate but rank {rank}, m {m}, bound {bound}")
    return EvalCertificate(p, q, n, m, E, valid, bound, rank)


def eval_matrix_from_geometry(fam: SetPairFamily, p: int) -> np.ndarray:
    """The evaluation matrix recomputed from intersection sizes alone."""
    m = fam.m
    E = np.zeros((m, m), dtype=np.int64)
    for i, (A, _) in enumerate(fam.pairs):
        for j, (_, B) in enumerate(fam.pairs):
            E[i, j] = (1 - geo.affine_intersect(A, B).size) % p
    return E
