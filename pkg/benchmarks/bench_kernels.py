"""Compare the compiled and pure-Python search kernels.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--cases 2,3 3,2]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from affbol import geometry as geo
from affbol import kernels
from affbol.search import build_ground_set, canonical_seeds


def _case(text: str) -> tuple[int, int]:
    n, q = text.split(",")
    return int(n), int(q)


def time_search(backend, outs, seeds, repeat):
    best_time, stats = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        g = backend.prepare(outs)
        best, expanded = 0, 0
        for s in seeds:
            res = backend.search_seed(g, s, best, 2**62, 32)
            best, expanded = max(best, res[0]), expanded + res[2]
        best_time = min(best_time, time.perf_counter() - t0)
        stats = (best, expanded)
    return best_time, stats


def time_popcount(backend, A, B, repeat):
    best_time = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        backend.and_popcount_matrix(A, B)
        best_time = min(best_time, time.perf_counter() - t0)
    return best_time


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--cases", nargs="*", type=_case, default=[(2, 3), (2, 4), (3, 2)])
    args = ap.parse_args(argv)

    names = sorted(kernels.BACKENDS)
    print(f"backends available: {', '.join(names)}")
    print(f"{'case':>10} {'nodes':>6} " + " ".join(f"{n:>12}" for n in names) + "   result")
    for n, q in args.cases:
        gs = build_ground_set(geo.make_space(n, q))
        outs, seeds = [p.out for p in gs.nodes], canonical_seeds(gs)
        times, results = [], set()
        for name in names:
            t, stats = time_search(kernels.BACKENDS[name], outs, seeds, args.repeat)
            times.append(t)
            results.add(stats)
        agree = "agree" if len(results) == 1 else f"MISMATCH {results}"
        best, expanded = next(iter(results))
        print(f"{f'search {n},{q}':>10} {len(gs):>6} " + " ".join(f"{t:>11.4f}s" for t in times)
              + f"   best_m={best} expanded={expanded} {agree}")

    rng = np.random.default_rng(0)
    A = rng.integers(0, 2**63, size=(400, 12), dtype=np.uint64)
    B = rng.integers(0, 2**63, size=(400, 12), dtype=np.uint64)
    times = [time_popcount(kernels.BACKENDS[name], A, B, args.repeat) for name in names]
    print(f"{'popcount':>10} {'400^2':>6} " + " ".join(f"{t:>11.4f}s" for t in times))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
