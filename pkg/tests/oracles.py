"""Brute-force reference computations, deliberately independent of the
RREF / canonical-form code paths they are used to check."""

import itertools

from affbol import algebra


# --- polynomials over F_r, coefficient lists constant term first ----------

def poly_trim(a):
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def poly_mul(a, b, r):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % r
    return poly_trim(out)


def poly_mod(a, m, r):
    a = poly_trim(a)
    inv_lead = pow(m[-1], r - 2, r)
    while len(a) >= len(m) and any(a):
        shift = len(a) - len(m)
        f = (a[-1] * inv_lead) % r
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - f * c) % r
        a = poly_trim(a)
    return a + [0] * (len(m) - 1 - len(a))


def digits(a, r, alpha):
    return [(a // r**k) % r for k in range(alpha)]


def undigits(ds, r):
    return sum(d * r**k for k, d in enumerate(ds))


def field_mul_oracle(a, b, r, alpha, modulus):
    prod = poly_mul(digits(a, r, alpha), digits(b, r, alpha), r)
    return undigits(poly_mod(prod, list(modulus), r)[:alpha], r)


def poly_powmod(base, e, m, r):
    result = [1]
    base = poly_mod(base, m, r)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, base, r), m, r)
        base = poly_mod(poly_mul(base, base, r), m, r)
        e >>= 1
    return poly_trim(result)


def poly_eval_poly(f, x, m, r):
    """f(x) mod m where x is itself a polynomial."""
    acc = [0]
    for c in reversed(f):
        acc = poly_mod(poly_mul(acc, x, r), m, r)
        acc = poly_trim([(acc[0] + c) % r] + acc[1:]) if acc else [c % r]
    return poly_trim(acc)


def _prime_factors(k):
    return algebra.prime_factors(k)


def is_primitive(f, r, alpha):
    order = r**alpha - 1
    x = [0, 1]
    if poly_trim(poly_powmod(x, order, f, r)) != [1]:
        return False
    return all(poly_trim(poly_powmod(x, order // p, f, r)) != [1] for p in _prime_factors(order))


def conway_from_definition(r, alpha, smaller):
    """Least primitive polynomial, in Conway's alternating-sign order, that is
    compatible with the given Conway polynomials of proper-divisor degrees."""
    for rev in itertools.product(range(r), repeat=alpha):
        # rev = (a_{alpha-1}, ..., a_0); coefficient of x^k is (-1)^(alpha-k) a_k
        coeffs = [0] * alpha + [1]
        for idx, a in enumerate(rev):
            k = alpha - 1 - idx
            coeffs[k] = ((-1) ** (alpha - k) * a) % r
        if coeffs[0] == 0 or not is_primitive(coeffs, r, alpha):
            continue
        ok = True
        for d in range(1, alpha):
            if alpha % d:
                continue
            e = (r**alpha - 1) // (r**d - 1)
            xe = poly_powmod([0, 1], e, coeffs, r)
            if any(poly_eval_poly(smaller[d], xe, coeffs, r)):
                ok = False
                break
        if ok:
            return tuple(coeffs)
    raise AssertionError("no Conway polynomial found")


# --- point-set geometry -----------------------------------------------------

def all_vectors(q, n):
    return [tuple(v) for v in itertools.product(range(q), repeat=n)]


def span_set(F, vecs, n):
    out = {(0,) * n}
    for v in vecs:
        out = {tuple(F.add(a, F.mul(c, b)) for a, b in zip(w, v))
               for w in out for c in range(F.q)}
    return frozenset(out)


def coset_points(F, point, vecs, n):
    return frozenset(tuple(F.add(a, b) for a, b in zip(point, u)) for u in span_set(F, vecs, n))


def all_coset_point_sets(F, n):
    """Every affine subspace of F_q^n as a frozenset of points, by brute force."""
    pts = all_vectors(F.q, n)
    spans = {frozenset([(0,) * n])}
    frontier = set(spans)
    while frontier:
        nxt = set()
        for S in frontier:
            for v in pts:
                if v not in S:
                    T = frozenset(tuple(F.add(a, F.mul(c, b)) for a, b in zip(w, v))
                                  for w in S for c in range(F.q))
                    if T not in spans:
                        nxt.add(T)
        spans |= nxt
        frontier = nxt
    out = set()
    for U in spans:
        for a in pts:
            out.add(frozenset(tuple(F.add(x, y) for x, y in zip(a, u)) for u in U))
    return out


# --- sequence search --------------------------------------------------------

def pair_graph(pairs):
    """Out-neighbour sets from explicit point-set pairs [(A, B), ...]."""
    return [frozenset(j for j, (_, B) in enumerate(pairs) if A & B) for A, _ in pairs]


def naive_longest_sequence(out):
    """Plain DFS over every valid sequence; no pruning, no memo."""
    best = 0

    def extend(length, cand):
        nonlocal best
        best = max(best, length)
        for c in cand:
            extend(length + 1, cand & out[c])

    extend(0, frozenset(range(len(out))))
    return best


def setdp_longest_sequence(out):
    """Exact max via memoised recursion on the candidate set (frozensets)."""
    memo = {}

    def ext(cand):
        if cand not in memo:
            memo[cand] = max((1 + ext(cand & out[c]) for c in cand), default=0)
        return memo[cand]

    return ext(frozenset(range(len(out))))


# --- vectorised brute force for larger random trials ------------------------

def random_coset_data(F, n, rng, max_gens=None):
    """A random base point and a random (possibly dependent) list of generators."""
    k = rng.randint(0, n if max_gens is None else max_gens)
    gens = [tuple(rng.randrange(F.q) for _ in range(n)) for _ in range(k)]
    base = tuple(rng.randrange(F.q) for _ in range(n))
    return base, gens


def coset_index_set(F, n, base, gens):
    """Point indices of base + span(gens), by summing every coefficient combination."""
    import numpy as np

    add, mul, _ = F.tables()
    q = F.q
    k = len(gens)
    combos = np.array(list(itertools.product(range(q), repeat=k)), dtype=np.int64)
    combos = combos.reshape(q**k, k)
    pts = np.tile(np.array(base, dtype=np.int64), (len(combos), 1))
    for i, g in enumerate(gens):
        for c in range(n):
            pts[:, c] = add[pts[:, c], mul[combos[:, i], g[c]]]
    weights = q ** np.arange(n, dtype=np.int64)
    return frozenset((pts @ weights).tolist())


def random_symmetric_set_family(rng, ground=8, attempts=60):
    """Greedily grow a family with A_i ∩ B_j empty exactly when i == j."""
    pairs = []
    for _ in range(attempts):
        elems = list(range(1, ground + 1))
        rng.shuffle(elems)
        a_size = rng.randint(0, ground)
        b_size = rng.randint(0, ground - a_size)
        A = frozenset(elems[:a_size])
        B = frozenset(elems[a_size:a_size + b_size])
        if all(A & Bj and Aj & B for Aj, Bj in pairs):
            pairs.append((A, B))
    return pairs


def brute_pair_ground_set(F, n):
    """All disjoint (A, B) coset pairs as point sets, independent of the package enumerator."""
    cosets = sorted(all_coset_point_sets(F, n), key=lambda S: (len(S), sorted(S)))
    return [(A, B) for A in cosets for B in cosets if not A & B]
