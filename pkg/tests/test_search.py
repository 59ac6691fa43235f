import json

import pytest

from affbol import algebra, kernels
from affbol import geometry as geo
from affbol.errors import BudgetExceeded, BudgetExhausted, VersionMismatch
from affbol.families import verify_cross_intersecting
from affbol.search import (affine_group, build_ground_set, canonical_seeds, node_orbits,
                           prune_bound, search_affine, search_max, search_projective,
                           symmetrised)

import oracles


def random_digraph(rng, n, density):
    return [sum(1 << j for j in range(n) if j != i and rng.random() < density)
            for i in range(n)]


def kernel_best(backend, outs, threshold=32):
    g = backend.prepare(outs)
    best = 0
    for s in range(len(outs)):
        best = backend.search_seed(g, s, best, 2**62, threshold)[0]
    return best


def test_ground_set_small():
    gs = build_ground_set(geo.make_space(1, 3))
    # points x points (6 ordered distinct pairs); lines meet every point
    assert len(gs) == 6
    assert gs.unfiltered


def test_ground_set_matches_double_loop():
    space = geo.make_space(2, 3)
    subs = geo.enumerate_affine_subspaces(space)
    expected = sum(1 for A in subs for B in subs if not set(A.points()) & set(B.points()))
    gs = build_ground_set(space)
    assert len(gs) == expected == 240
    for p in gs.nodes:
        for q in gs.nodes:
            assert bool(p.out >> q.id & 1) == bool(set(p.A.points()) & set(q.B.points()))


def test_dims_filter_and_cap():
    space = geo.make_space(2, 3)
    gs = build_ground_set(space, [1], [1])
    assert {(p.A.dim, p.B.dim) for p in gs.nodes} == {(1, 1)}
    assert len(gs) == 12 * 2 and not gs.unfiltered
    with pytest.raises(BudgetExceeded):
        build_ground_set(space, cap=10)


def test_edges_are_not_symmetric():
    gs = build_ground_set(geo.make_space(2, 2))
    asym = [(p.id, q.id) for p in gs.nodes for q in gs.nodes
            if (p.out >> q.id & 1) != (q.out >> p.id & 1)]
    assert asym


def test_prune_bound_is_an_upper_bound(rng):
    for _ in range(20):
        outs = random_digraph(rng, 24, 0.6)
        sym = symmetrised([type("N", (), {"out": o})() for o in outs])
        full = (1 << 24) - 1
        assert prune_bound(0, full, sym, threshold=0) >= oracles.setdp_longest_sequence(
            [frozenset(j for j in range(24) if o >> j & 1) for o in outs])
    assert prune_bound(3, 0b1011, sym) == 6


def test_seeds():
    gs = build_ground_set(geo.make_space(1, 3))
    assert len(canonical_seeds(gs)) == 1


@pytest.mark.parametrize("n,q", [(1, 3), (2, 2), (2, 3)])
def test_generator_orbits_match_full_group(n, q):
    gs = build_ground_set(geo.make_space(n, q))
    full = node_orbits(gs, affine_group(gs.space))
    assert node_orbits(gs) == full


@pytest.mark.parametrize("n,q,expected", [(1, 2, 2), (1, 3, 2), (1, 4, 2), (1, 5, 2),
                                          (2, 2, 6), (2, 3, 8)])
def test_search_matches_brute_oracle(n, q, expected):
    F = algebra.fq_make(q)
    out = oracles.pair_graph(oracles.brute_pair_ground_set(F, n))
    oracle = oracles.setdp_longest_sequence(out)
    if len(out) <= 50:
        assert oracles.naive_longest_sequence(out) == oracle
    res = search_affine(n, q)
    assert res.optimal and res.best_m == oracle == expected
    assert verify_cross_intersecting(res.witness) == []


@pytest.mark.slow
def test_search_2_4_matches_oracle():
    out = oracles.pair_graph(oracles.brute_pair_ground_set(algebra.fq_make(4), 2))
    res = search_affine(2, 4)
    assert res.optimal and res.best_m == oracles.setdp_longest_sequence(out) == 10


@pytest.mark.parametrize("name", sorted(kernels.BACKENDS))
def test_kernels_on_random_digraphs(rng, name):
    backend = kernels.BACKENDS[name]
    for size, density in [(12, 0.3), (18, 0.5), (22, 0.7), (24, 0.8)]:
        for _ in range(5):
            outs = random_digraph(rng, size, density)
            sets = [frozenset(j for j in range(size) if o >> j & 1) for o in outs]
            assert kernel_best(backend, outs, threshold=4) == \
                oracles.setdp_longest_sequence(sets)


def test_backend_parity():
    if len(kernels.BACKENDS) < 2:
        pytest.skip("compiled kernels are not built")
    gs = build_ground_set(geo.make_space(2, 3))
    outs = [p.out for p in gs.nodes]
    results = {}
    for name, backend in kernels.BACKENDS.items():
        g = backend.prepare(outs)
        results[name] = [backend.search_seed(g, s, 0, 2**62, 32) for s in (0, 17, 100)]
    py, c = results["python"], results["cython"]
    assert [r[:7] for r in py] == [r[:7] for r in c]


def test_and_popcount_parity(rng):
    import numpy as np

    A = np.array([[rng.getrandbits(64) for _ in range(3)] for _ in range(7)], dtype=np.uint64)
    B = np.array([[rng.getrandbits(64) for _ in range(3)] for _ in range(5)], dtype=np.uint64)
    expected = [[sum(bin(int(a) & int(b)).count("1") for a, b in zip(r, s)) for s in B]
                for r in A]
    for backend in kernels.BACKENDS.values():
        assert backend.and_popcount_matrix(A, B).tolist() == expected


def test_determinism():
    a, b = search_affine(2, 3), search_affine(2, 3)
    assert a.sequence == b.sequence and a.best_m == b.best_m
    sa = {k: v for k, v in a.stats.items() if k != "wall_time_s"}
    sb = {k: v for k, v in b.stats.items() if k != "wall_time_s"}
    assert sa == sb


def test_no_symmetry_agrees():
    gs = build_ground_set(geo.make_space(2, 2))
    assert search_max(gs, seeds=range(len(gs))).best_m == search_max(gs).best_m == 6


def test_budget_exhaustion():
    res = search_affine(2, 3, budget=5)
    assert not res.optimal and res.stats["nodes_expanded"] <= 5
    assert verify_cross_intersecting(res.witness) == []
    with pytest.raises(BudgetExhausted) as info:
        search_affine(2, 3, budget=5, strict=True)
    assert info.value.result.best_m == res.best_m


def test_checkpoint_resume(tmp_path):
    path = str(tmp_path / "ck.json")
    gs = build_ground_set(geo.make_space(2, 3))
    first = search_max(gs, budget=200, checkpoint=path)
    data = json.loads(open(path).read())
    assert data["best_m"] == first.best_m
    done_before = len(data["exhausted_seeds"])
    final = search_max(gs, checkpoint=path)
    assert final.optimal and final.best_m == 8
    assert final.stats["seeds_completed"] == final.stats["seeds_total"] >= done_before
    other = build_ground_set(geo.make_space(2, 3), [1], [1])
    with pytest.raises(VersionMismatch):
        search_max(other, checkpoint=path)


def test_parallel_workers():
    res = search_affine(2, 3, workers=2)
    assert res.optimal and res.best_m == 8 and res.stats["workers"] == 2


@pytest.mark.parametrize("n,q,expected", [(1, 2, 2), (1, 3, 2), (2, 2, 6)])
def test_projective_search(n, q, expected):
    res = search_projective(n, q)
    assert res.optimal and res.best_m == expected
    assert res.bounds_context["conjecture"] == 2 ** (n + 1) - 2
    assert res.bounds_context["exceeds_conjecture"] is False
    assert verify_cross_intersecting(res.witness) == []


def test_sandwich_guard(monkeypatch):
    from affbol import search
    from affbol.errors import InternalInconsistency

    monkeypatch.setattr(search, "_bounds_context", lambda gs: {"lower": 100, "upper": 200})
    with pytest.raises(InternalInconsistency):
        search_affine(1, 3)
