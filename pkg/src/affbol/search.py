"""Exact branch-and-bound search for the longest cross-intersecting sequence.

The ground set holds every ordered pair (A, B) of disjoint subspaces; node
P has an edge to node Q when A_P meets B_Q.  A valid sequence p_1..p_k needs
p_i -> p_j for every i < j, and nothing in the reverse direction, so the
search extends a prefix only by nodes in the intersection of its members'
out-neighbourhoods.

Witnesses are re-verified with the families module before being reported.
"""

from __future__ import annotations

import itertools
import json
import logging
import multiprocessing as mp
import os
import time
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

from . import geometry as geo
from . import kernels
from .algebra import vec_add
from .errors import BudgetExceeded, BudgetExhausted, InternalInconsistency, VersionMismatch
from .families import SetPairFamily, verify_cross_intersecting

log = logging.getLogger(__name__)

COLOR_THRESHOLD = 32
CHECKPOINT_VERSION = 1
DEFAULT_NODE_CAP = 200_000


@dataclass
class PairNode:
    id: int
    A: Any
    B: Any
    out: int  # bitset of node ids j with A ∩ B_j nonempty


@dataclass
class GroundSet:
    geometry: str  # "affine" or "projective"
    space: geo.SpaceDesc
    dims_a: tuple[int, ...]
    dims_b: tuple[int, ...]
    nodes: list[PairNode]

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def unfiltered(self) -> bool:
        top = self.space.n if self.geometry == "affine" else self.space.n - 1
        full = tuple(range(top + 1))
        return self.dims_a == full and self.dims_b == full


@dataclass
class SearchResult:
    best_m: int
    witness: SetPairFamily
    optimal: bool
    stats: dict
    bounds_context: dict
    sequence: tuple[int, ...] = ()


def _subspaces(geometry: str, space: geo.SpaceDesc, dims):
    if geometry == "affine":
        return geo.enumerate_affine_subspaces(space, dims)
    if geometry == "projective":
        return geo.enumerate_projective_subspaces(space, dims)
    raise ValueError(f"search supports affine or projective geometry, not {geometry!r}")


def build_ground_set(space: geo.SpaceDesc, dims_a=None, dims_b=None, geometry: str = "affine",
                     cap: int = DEFAULT_NODE_CAP) -> GroundSet:
    """Every disjoint ordered pair (A, B) with the requested dimensions, plus edges.

    For projective geometry ``space`` is the homogeneous space and the
    dimensions are projective ones.
    """
    top = space.n if geometry == "affine" else space.n - 1
    dims_a = tuple(range(top + 1)) if dims_a is None else tuple(sorted(set(dims_a)))
    dims_b = tuple(range(top + 1)) if dims_b is None else tuple(sorted(set(dims_b)))
    subs = _subspaces(geometry, space, sorted(set(dims_a) | set(dims_b)))
    masks = [S.mask for S in subs]
    a_ids = [i for i, S in enumerate(subs) if S.dim in dims_a]
    b_ids = [i for i, S in enumerate(subs) if S.dim in dims_b]

    raw = [(a, b) for a in a_ids for b in b_ids if not masks[a] & masks[b]]
    if len(raw) > cap:
        raise BudgetExceeded(f"{len(raw)} ground-set nodes exceed the cap {cap}")
    by_b: dict[int, int] = {}
    for nid, (_, b) in enumerate(raw):
        by_b[b] = by_b.get(b, 0) | (1 << nid)
    out_of_a: dict[int, int] = {}
    for a in {a for a, _ in raw}:
        acc = 0
        for b, bits in by_b.items():
            if masks[a] & masks[b]:
                acc |= bits
        out_of_a[a] = acc
    nodes = [PairNode(nid, subs[a], subs[b], out_of_a[a]) for nid, (a, b) in enumerate(raw)]
    return GroundSet(geometry, space, dims_a, dims_b, nodes)


# ---------------------------------------------------------------------------
# bounding


def prune_bound(current_k: int, candidates: int, sym: Sequence[int],
                threshold: int = COLOR_THRESHOLD) -> int:
    """Upper bound on the final length reachable from a prefix of length ``current_k``.

    Any extension is a clique of the symmetrised graph, so it uses at most
    one vertex per greedy colour class.  Colouring is skipped for small
    candidate sets where counting is cheaper.
    """
    cnt = candidates.bit_count()
    if cnt <= threshold:
        return current_k + cnt
    return current_k + min(cnt, kernels._pykernels.greedy_colors(sym, candidates, cnt))


def symmetrised(nodes: Sequence[PairNode]) -> list[int]:
    return kernels._pykernels.Graph([p.out for p in nodes]).sym


# ---------------------------------------------------------------------------
# symmetry reduction


def _affine_generators(space: geo.SpaceDesc):
    """Maps x -> Mx + c generating the affine group AGL(n, q)."""
    F, n = space.field, space.n
    eye = [[int(i == j) for j in range(n)] for i in range(n)]
    mats = []
    if F.q > 2:
        d = [row[:] for row in eye]
        d[0][0] = F.generator
        mats.append(d)
    if n >= 2:
        swap = [row[:] for row in eye]
        swap[0], swap[1] = swap[1], swap[0]
        mats.append(swap)
        trans = [row[:] for row in eye]
        trans[0][1] = 1
        mats.append(trans)
    if n >= 3:
        mats.append([eye[(i + 1) % n] for i in range(n)])
    gens = [(tuple(map(tuple, M)), space.zero()) for M in mats]
    gens.append((tuple(map(tuple, eye)), tuple(int(i == 0) for i in range(n))))
    return gens


def _linear_generators(space: geo.SpaceDesc):
    return [g for g in _affine_generators(space) if not any(g[1])]


def affine_group(space: geo.SpaceDesc):
    """Every element (M, c) of AGL(n, q); brute force, tiny spaces only."""
    F, n = space.field, space.n
    out = []
    for entries in itertools.product(range(F.q), repeat=n * n):
        M = tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))
        if geo.linear_span(space, M).dim < n:
            continue
        for c in geo.all_points(space):
            out.append((M, c))
    return out


def _apply(space, g, v):
    M, c = g
    from .algebra import mat_vec
    return vec_add(space.field, mat_vec(space.field, M, v), c)


def _point_perm(space: geo.SpaceDesc, g, projective: bool) -> list[int]:
    pts = geo.all_points(space)
    F = space.field
    perm = []
    for v in pts:
        w = _apply(space, g, v)
        if projective and any(w):
            lead = next(x for x in w if x)
            w = tuple(F.mul(F.inverse(lead), x) for x in w)
        perm.append(geo.point_index(space, w))
    return perm


def _map_mask(mask: int, perm: list[int]) -> int:
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << perm[low.bit_length() - 1]
        mask ^= low
    return out


def node_orbits(gs: GroundSet, group=None) -> list[int]:
    """Orbit label (smallest node id in the orbit) of every node.

    By default the orbits come from a generating set of the affine group
    (or GL(n+1, q) for projective geometry) via union-find; pass ``group``
    to use an explicit list of elements instead.
    """
    projective = gs.geometry == "projective"
    if group is None:
        group = _linear_generators(gs.space) if projective else _affine_generators(gs.space)
    index = {(p.A.mask, p.B.mask): p.id for p in gs.nodes}
    parent = list(range(len(gs.nodes)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in group:
        perm = _point_perm(gs.space, g, projective)
        for p in gs.nodes:
            img = index.get((_map_mask(p.A.mask, perm), _map_mask(p.B.mask, perm)))
            if img is None:
                raise InternalInconsistency("group element mapped a node outside the ground set")
            a, b = find(p.id), find(img)
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(i) for i in range(len(gs.nodes))]


def canonical_seeds(gs: GroundSet) -> list[int]:
    """One node id per orbit of the symmetry group (the smallest id)."""
    return sorted(set(node_orbits(gs)))


# ---------------------------------------------------------------------------
# checkpoints


def _params_key(gs: GroundSet, seeds: Sequence[int]) -> dict:
    return {
        "geometry": gs.geometry,
        "q": gs.space.q,
        "n": gs.space.n if gs.geometry == "affine" else gs.space.n - 1,
        "dims_a": list(gs.dims_a),
        "dims_b": list(gs.dims_b),
        "nodes": len(gs.nodes),
        "seeds": list(seeds),
    }


def load_checkpoint(path, gs: GroundSet, seeds: Sequence[int]) -> Optional[dict]:
    if not path or not os.path.exists(path):
        return None
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if data.get("format_version") != CHECKPOINT_VERSION:
        raise VersionMismatch(f"checkpoint version {data.get('format_version')} is not "
                              f"{CHECKPOINT_VERSION}")
    if data.get("params") != _params_key(gs, seeds):
        raise VersionMismatch("checkpoint was written for a different search")
    return data


def save_checkpoint(path, gs: GroundSet, seeds, exhausted, best_m, best_seq) -> None:
    data = {
        "format_version": CHECKPOINT_VERSION,
        "params": _params_key(gs, seeds),
        "exhausted_seeds": sorted(exhausted),
        "best_m": best_m,
        "best_sequence": list(best_seq),
    }
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(data, fh, sort_keys=True, indent=1)
        fh.write("\n")
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# worker pool

_W: dict = {}


def _worker_init(out_masks, best, expanded, lock, budget, threshold):
    _W.update(graph=kernels.prepare(out_masks), best=best, expanded=expanded, lock=lock,
              budget=budget, threshold=threshold)


def _worker_run(seed):
    best, expanded, lock = _W["best"], _W["expanded"], _W["lock"]
    remaining = max(0, _W["budget"] - expanded.value)
    res = kernels.search_seed(_W["graph"], seed, best.value, remaining, _W["threshold"])
    with lock:
        expanded.value += res[2]
        if res[0] > best.value:
            best.value = res[0]
    return seed, res


# ---------------------------------------------------------------------------
# driver


def _bounds_context(gs: GroundSet) -> dict:
    q = gs.space.q
    if gs.geometry == "affine":
        n = gs.space.n
        return {"lower": (q**n - 1) // (q - 1), "upper": q**n + 1 if q >= 3 else None}
    n = gs.space.n - 1
    return {"conjecture": 2 ** (n + 1) - 2}


def search_max(gs: GroundSet, budget: Optional[int] = None, seeds: Optional[Sequence[int]] = None,
               workers: int = 1, checkpoint: Optional[str] = None,
               threshold: int = COLOR_THRESHOLD, strict: bool = False) -> SearchResult:
    """Longest cross-intersecting sequence in the ground set.

    ``budget`` caps the number of search-tree nodes expanded.  When it runs
    out the best sequence so far is returned with ``optimal=False`` (or
    BudgetExhausted is raised if ``strict``).
    """
    if not gs.nodes:
        raise ValueError("empty ground set")
    t0 = time.perf_counter()
    budget = budget if budget is not None else 2**62
    if seeds is None:
        seeds = canonical_seeds(gs)
    outs = [p.out for p in gs.nodes]
    order = sorted(seeds, key=lambda s: (-outs[s].bit_count(), s))

    best_m, best_seq = 0, []
    exhausted: set[int] = set()
    ck = load_checkpoint(checkpoint, gs, seeds)
    if ck:
        exhausted = set(ck["exhausted_seeds"])
        best_m, best_seq = ck["best_m"], list(ck["best_sequence"])
    stats = {"nodes_expanded": 0, "prunes_bound": 0, "prunes_child": 0,
             "prunes_memo": 0, "seeds_total": len(order), "seeds_completed": len(exhausted),
             "backend": kernels.BACKEND, "workers": workers}
    todo = [s for s in order if s not in exhausted]
    aborted = False

    def absorb(seed, res):
        nonlocal best_m, best_seq, aborted
        b, seq, expanded, pb, pc, pm, done = res
        stats["nodes_expanded"] += expanded
        stats["prunes_bound"] += pb
        stats["prunes_child"] += pc
        stats["prunes_memo"] += pm
        if b > best_m and seq:
            best_m, best_seq = b, list(seq)
        if done:
            exhausted.add(seed)
            stats["seeds_completed"] += 1
        else:
            aborted = True
        if checkpoint:
            save_checkpoint(checkpoint, gs, seeds, exhausted, best_m, best_seq)

    if workers <= 1 or len(todo) <= 1:
        graph = kernels.prepare(outs)
        for seed in todo:
            remaining = budget - stats["nodes_expanded"]
            if remaining <= 0:
                aborted = True
                break
            absorb(seed, kernels.search_seed(graph, seed, best_m, remaining, threshold))
    else:
        ctx = mp.get_context("fork")
        best_v, exp_v, lock = ctx.Value("i", best_m), ctx.Value("q", 0), ctx.Lock()
        with ctx.Pool(workers, _worker_init,
                      (outs, best_v, exp_v, lock, budget, threshold)) as pool:
            results = dict(pool.imap_unordered(_worker_run, todo))
        for seed in todo:  # fold in seed order so the witness is reproducible
            absorb(seed, results[seed])

    stats["wall_time_s"] = time.perf_counter() - t0
    pairs = tuple((gs.nodes[i].A, gs.nodes[i].B) for i in best_seq)
    witness = SetPairFamily(gs.geometry, gs.space, pairs, "skew")
    bad = verify_cross_intersecting(witness)
    if bad or len(pairs) != best_m:
        raise InternalInconsistency(f"search witness fails verification: {bad[:3]}")
    optimal = not aborted and len(exhausted) == len(order)
    result = SearchResult(best_m, witness, optimal, stats, _bounds_context(gs), tuple(best_seq))
    _check_sandwich(gs, result)
    if strict and not optimal:
        raise BudgetExhausted(f"node budget {budget} exhausted with best_m = {best_m}", result)
    return result


def _check_sandwich(gs: GroundSet, res: SearchResult) -> None:
    if not res.optimal or gs.geometry != "affine":
        return
    n = gs.space.n
    ctx = res.bounds_context
    if (n - 1) in gs.dims_a and (n - 1) in gs.dims_b and res.best_m < ctx["lower"]:
        raise InternalInconsistency(
            f"optimal search found {res.best_m} < construction size {ctx['lower']}")
    if gs.unfiltered and ctx["upper"] is not None and res.best_m > ctx["upper"]:
        raise InternalInconsistency(
            f"optimal search found {res.best_m} > q^n + 1 = {ctx['upper']}")


def search_affine(n: int, q: int, dims_a=None, dims_b=None, **kw) -> SearchResult:
    return search_max(build_ground_set(geo.make_space(n, q), dims_a, dims_b, "affine"), **kw)


def search_projective(n: int, q: int, dims_a=None, dims_b=None, **kw) -> SearchResult:
    """Exact search in PG(n, q); the result records the comparison with 2^(n+1) - 2."""
    gs = build_ground_set(geo.projective_space(n, q), dims_a, dims_b, "projective")
    res = search_max(gs, **kw)
    conj = res.bounds_context["conjecture"]
    res.bounds_context["exceeds_conjecture"] = res.best_m > conj
    if res.best_m > conj:
        log.warning("PG(%d,%d): best_m = %d exceeds 2^(n+1)-2 = %d; witness sequence %s",
                    n, q, res.best_m, conj, res.sequence)
    return res
