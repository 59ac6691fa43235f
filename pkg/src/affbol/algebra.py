"""Exact arithmetic in F_q and small dense linear algebra over it.

Field elements are plain integers ``0 .. q-1``.  When ``q = r**alpha`` with
``alpha > 1`` an element encodes the base-``r`` digits of its polynomial
representative, least significant digit first (the constant term).

Vectors are tuples of elements and matrices are tuples of row tuples.  Every
routine takes the :class:`FieldDesc` explicitly; nothing here touches floats.
"""

from __future__ import annotations

import functools
import itertools
from typing import Optional, Sequence

import numpy as np

from ._conway import CONWAY
from .errors import DimensionMismatch, DivisionByZero, NotPrimePower

Vec = tuple[int, ...]
Mat = tuple[Vec, ...]

MAX_Q = 512


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return ``(r, alpha)`` with ``q == r**alpha`` or raise NotPrimePower."""
    if q < 2:
        raise NotPrimePower(f"q={q} is not a prime power")
    r = next(d for d in itertools.count(2) if q % d == 0)
    alpha, rest = 0, q
    while rest % r == 0:
        rest //= r
        alpha += 1
    if rest != 1:
        raise NotPrimePower(f"q={q} has at least two distinct prime factors")
    return r, alpha


def is_prime(k: int) -> bool:
    if k < 2:
        return False
    return all(k % d for d in range(2, int(k**0.5) + 1))


def prime_factors(k: int) -> list[int]:
    out, d = [], 2
    while d * d <= k:
        if k % d == 0:
            out.append(d)
            while k % d == 0:
                k //= d
        d += 1
    if k > 1:
        out.append(k)
    return out


def _smallest_primitive_root(p: int) -> int:
    if p == 2:
        return 1
    fac = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in fac):
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


class FieldDesc:
    """The finite field F_q with precomputed operation tables.

    Instances are immutable and cached per ``q`` by :func:`fq_make`, so
    identity comparison is enough in practice; ``==`` compares ``q`` and the
    modulus.
    """

    __slots__ = (
        "q", "r", "alpha", "irreducible_poly", "generator",
        "exp", "log", "add_table", "mul_table", "neg", "inv", "_np",
    )

    def __init__(self, q: int, r: int, alpha: int, irreducible_poly, generator,
                 exp, log, add_table, mul_table, neg, inv):
        self.q = q
        self.r = r
        self.alpha = alpha
        self.irreducible_poly = irreducible_poly
        self.generator = generator
        self.exp = exp
        self.log = log
        self.add_table = add_table
        self.mul_table = mul_table
        self.neg = neg
        self.inv = inv
        self._np = None

    def __repr__(self) -> str:
        if self.alpha == 1:
            return f"FieldDesc(q={self.q})"
        return f"FieldDesc(q={self.q}, modulus={self.irreducible_poly})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldDesc):
            return NotImplemented
        return self.q == other.q and self.irreducible_poly == other.irreducible_poly

    def __hash__(self) -> int:
        return hash((self.q, self.irreducible_poly))

    def __reduce__(self):
        return (fq_make, (self.q,))

    @property
    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def negate(self, a: int) -> int:
        return self.neg[a]

    def inverse(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no multiplicative inverse")
        return self.inv[a]

    def power(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise DivisionByZero("negative power of 0")
            return 1 if e == 0 else 0
        return self.exp[(self.log[a] * e) % (self.q - 1)]

    def tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(add, mul, neg)`` as numpy arrays for vectorised callers."""
        if self._np is None:
            self._np = (
                np.array(self.add_table, dtype=np.int64),
                np.array(self.mul_table, dtype=np.int64),
                np.array(self.neg, dtype=np.int64),
            )
        return self._np


def _poly_mulx_mod(digits: list[int], modulus: Sequence[int], r: int) -> list[int]:
    """Multiply a polynomial (constant term first) by x, reducing mod a monic modulus."""
    alpha = len(modulus) - 1
    top = digits[-1]
    shifted = [0] + digits[:-1]
    if top:
        shifted = [(c - top * m) % r for c, m in zip(shifted, modulus[:alpha])]
    return shifted


def _to_digits(a: int, r: int, alpha: int) -> list[int]:
    out = []
    for _ in range(alpha):
        a, d = divmod(a, r)
        out.append(d)
    return out


def _from_digits(digits: Sequence[int], r: int) -> int:
    val = 0
    for d in reversed(digits):
        val = val * r + d
    return val


@functools.lru_cache(maxsize=None)
def fq_make(q: int) -> FieldDesc:
    """Build F_q.  Prime-power fields use the tabulated Conway modulus."""
    r, alpha = factor_prime_power(q)
    if q > MAX_Q:
        raise NotPrimePower(f"q={q} exceeds the supported maximum {MAX_Q}")

    if alpha == 1:
        modulus = None
        g = _smallest_primitive_root(q)
        exp = [pow(g, k, q) for k in range(q - 1)]
        add = [[(a + b) % q for b in range(q)] for a in range(q)]
        neg = [(-a) % q for a in range(q)]
    else:
        modulus = CONWAY[(r, alpha)]
        g = r  # the polynomial x
        exp = []
        digits = [1] + [0] * (alpha - 1)
        for _ in range(q - 1):
            exp.append(_from_digits(digits, r))
            digits = _poly_mulx_mod(digits, modulus, r)
        dig = np.array([_to_digits(a, r, alpha) for a in range(q)], dtype=np.int64)
        weights = r ** np.arange(alpha, dtype=np.int64)
        add = (((dig[:, None, :] + dig[None, :, :]) % r) @ weights).tolist()
        neg = (((-dig) % r) @ weights).tolist()

    if len(set(exp)) != q - 1:
        raise AssertionError(f"generator of F_{q} is not primitive")
    log = [0] * q
    for k, v in enumerate(exp):
        log[v] = k
    mul = [[0] * q for _ in range(q)]
    for a in range(1, q):
        la = log[a]
        row = mul[a]
        for b in range(1, q):
            row[b] = exp[(la + log[b]) % (q - 1)]
    inv = [0] + [exp[(-log[a]) % (q - 1)] for a in range(1, q)]

    field = FieldDesc(q, r, alpha, modulus, g, tuple(exp), tuple(log),
                      add, mul, tuple(neg), tuple(inv))
    _check_axioms(field)
    return field


def _check_axioms(F: FieldDesc) -> None:
    q = F.q
    for a in range(1, q):
        if F.mul_table[a][F.inv[a]] != 1:
            raise AssertionError(f"inverse table broken in F_{q} at {a}")
        if F.add_table[a][F.neg[a]] != 0:
            raise AssertionError(f"negation table broken in F_{q} at {a}")
    if q > 16:
        return
    add, mul = F.add_table, F.mul_table
    for a, b in itertools.product(range(q), repeat=2):
        if add[a][b] != add[b][a] or mul[a][b] != mul[b][a]:
            raise AssertionError(f"F_{q} is not commutative at ({a}, {b})")
    for a, b, c in itertools.product(range(q), repeat=3):
        if add[add[a][b]][c] != add[a][add[b][c]]:
            raise AssertionError(f"F_{q} addition not associative at {(a, b, c)}")
        if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
            raise AssertionError(f"F_{q} multiplication not associative at {(a, b, c)}")
        if mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]]:
            raise AssertionError(f"F_{q} not distributive at {(a, b, c)}")


def fq_arith(field: FieldDesc, op: str, a: int, b: Optional[int] = None) -> int:
    """Dispatch one of ``add, sub, mul, neg, inv, pow`` by name."""
    if op == "add":
        return field.add(a, b)
    if op == "sub":
        return field.sub(a, b)
    if op == "mul":
        return field.mul(a, b)
    if op == "neg":
        return field.negate(a)
    if op == "inv":
        return field.inverse(a)
    if op == "pow":
        return field.power(a, b)
    raise ValueError(f"unknown field operation {op!r}")


# ---------------------------------------------------------------------------
# vectors and matrices


def vec_add(F: FieldDesc, u: Sequence[int], v: Sequence[int]) -> Vec:
    add = F.add_table
    return tuple(add[a][b] for a, b in zip(u, v))


def vec_sub(F: FieldDesc, u: Sequence[int], v: Sequence[int]) -> Vec:
    add, neg = F.add_table, F.neg
    return tuple(add[a][neg[b]] for a, b in zip(u, v))


def vec_scale(F: FieldDesc, c: int, v: Sequence[int]) -> Vec:
    row = F.mul_table[c]
    return tuple(row[x] for x in v)


def dot(F: FieldDesc, u: Sequence[int], v: Sequence[int]) -> int:
    add, mul = F.add_table, F.mul_table
    acc = 0
    for a, b in zip(u, v):
        acc = add[acc][mul[a][b]]
    return acc


def mat_vec(F: FieldDesc, M: Sequence[Sequence[int]], x: Sequence[int]) -> Vec:
    return tuple(dot(F, row, x) for row in M)


def vec_mat(F: FieldDesc, x: Sequence[int], M: Sequence[Sequence[int]], ncols: int) -> Vec:
    """Row vector times matrix: the combination ``sum x[i] * M[i]``."""
    acc = (0,) * ncols
    for c, row in zip(x, M):
        if c:
            acc = vec_add(F, acc, vec_scale(F, c, row))
    return acc


def transpose(M: Sequence[Sequence[int]], ncols: int) -> Mat:
    if not M:
        return tuple(() for _ in range(ncols))
    return tuple(zip(*M))


def _ncols(M: Sequence[Sequence[int]], ncols: Optional[int]) -> int:
    if ncols is not None:
        if any(len(row) != ncols for row in M):
            raise DimensionMismatch("row length differs from the declared width")
        return ncols
    if not M:
        raise DimensionMismatch("width of an empty matrix must be given explicitly")
    width = len(M[0])
    if any(len(row) != width for row in M):
        raise DimensionMismatch("matrix is not rectangular")
    return width


def rref(F: FieldDesc, M: Sequence[Sequence[int]], ncols: Optional[int] = None
         ) -> tuple[Mat, tuple[int, ...], int]:
    """Reduced row echelon form.

    Returns ``(R, pivots, rank)`` where ``R`` has the same shape as ``M``
    (zero rows kept at the bottom).
    """
    width = _ncols(M, ncols)
    rows = [list(r) for r in M]
    add, mul, neg, inv = F.add_table, F.mul_table, F.neg, F.inv
    pivots = []
    lead = 0
    for col in range(width):
        pr = next((i for i in range(lead, len(rows)) if rows[i][col]), None)
        if pr is None:
            continue
        rows[lead], rows[pr] = rows[pr], rows[lead]
        piv = rows[lead]
        c = piv[col]
        if c != 1:
            srow = mul[inv[c]]
            piv = [srow[x] for x in piv]
            rows[lead] = piv
        for i, row in enumerate(rows):
            f = row[col]
            if i != lead and f:
                mrow = mul[neg[f]]
                rows[i] = [add[a][mrow[b]] for a, b in zip(row, piv)]
        pivots.append(col)
        lead += 1
        if lead == len(rows):
            break
    return tuple(tuple(r) for r in rows), tuple(pivots), lead


def is_rref(M: Sequence[Sequence[int]]) -> bool:
    last = -1
    seen_zero = False
    pivots = []
    for row in M:
        nz = next((j for j, x in enumerate(row) if x), None)
        if nz is None:
            seen_zero = True
            continue
        if seen_zero or nz <= last or row[nz] != 1:
            return False
        last = nz
        pivots.append((row, nz))
    for row, col in pivots:
        if sum(1 for other in M if other[col]) != 1:
            return False
    return True


def row_basis(F: FieldDesc, M: Sequence[Sequence[int]], ncols: int) -> Mat:
    """The nonzero rows of the RREF: the canonical basis of the row space."""
    R, _, rank = rref(F, M, ncols)
    return R[:rank]


def rank(F: FieldDesc, M: Sequence[Sequence[int]], ncols: int) -> int:
    return rref(F, M, ncols)[2]


def kernel(F: FieldDesc, M: Sequence[Sequence[int]], ncols: int) -> Mat:
    """Basis of ``{x : M x = 0}``, one vector per free column, in RREF."""
    R, pivots, r = rref(F, M, ncols)
    neg = F.neg
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for i, pc in enumerate(pivots):
            x[pc] = neg[R[i][f]]
        basis.append(tuple(x))
    return row_basis(F, basis, ncols) if basis else ()


def solve_affine(F: FieldDesc, M: Sequence[Sequence[int]], b: Sequence[int],
                 ncols: Optional[int] = None) -> tuple[Optional[Vec], Mat]:
    """Solve ``M x = b``.

    Returns ``(x, kernel_basis)``; ``x`` is None when the system is
    infeasible.  The full solution set is ``x + span(kernel_basis)``.
    """
    width = _ncols(M, ncols)
    if len(b) != len(M):
        raise DimensionMismatch("right-hand side length differs from row count")
    aug = [tuple(row) + (bi,) for row, bi in zip(M, b)]
    R, pivots, r = rref(F, aug, width + 1)
    ker = kernel(F, M, width)
    if pivots and pivots[-1] == width:
        return None, ker
    x = [0] * width
    for i, pc in enumerate(pivots):
        x[pc] = R[i][width]
    return tuple(x), ker


def subspace_sum(F: FieldDesc, U: Sequence[Sequence[int]], V: Sequence[Sequence[int]],
                 ncols: int) -> Mat:
    """RREF basis of U + V."""
    return row_basis(F, tuple(U) + tuple(V), ncols)


def subspace_intersection(F: FieldDesc, U: Sequence[Sequence[int]],
                          V: Sequence[Sequence[int]], ncols: int) -> Mat:
    """RREF basis of the intersection of two row spaces.

    Uses the left kernel of the stacked matrix ``[U; V]``: every relation
    ``a U + b V = 0`` yields the common vector ``a U``.
    """
    U = row_basis(F, U, ncols)
    V = row_basis(F, V, ncols)
    if not U or not V:
        return ()
    stacked = U + V
    rel = kernel(F, transpose(stacked, ncols), len(stacked))
    common = [vec_mat(F, a[: len(U)], U, ncols) for a in rel]
    return row_basis(F, common, ncols) if common else ()


def span(F: FieldDesc, basis: Sequence[Sequence[int]], ncols: int) -> set[Vec]:
    """All vectors of the row space; exponential, for oracles and tiny cases."""
    out = {(0,) * ncols}
    for row in basis:
        out = {vec_add(F, v, vec_scale(F, c, row)) for v in out for c in range(F.q)}
    return out


def rank_mod_p(M: np.ndarray, p: int) -> int:
    """Rank of an integer matrix over the prime field F_p (vectorised)."""
    A = np.array(M, dtype=np.int64) % p
    if A.size == 0:
        return 0
    nrows, ncols = A.shape
    r = 0
    for col in range(ncols):
        nz = np.nonzero(A[r:, col])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        A[r] = (A[r] * pow(int(A[r, col]), p - 2, p)) % p
        factors = A[:, col].copy()
        factors[r] = 0
        hit = np.nonzero(factors)[0]
        if hit.size:
            A[hit] = (A[hit] - np.outer(factors[hit], A[r])) % p
        r += 1
        if r == nrows:
            break
    return r
