"""Pure-Python kernels; the reference the compiled ``_ckernels`` must match exactly.

Bitsets are Python ints.  ``search_seed`` returns identical results and
statistics to the compiled version for the same inputs.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


DEFAULT_MEMO_CAP = 1 << 22


class Graph:
    """Out-neighbour and symmetrised bitsets of a directed compatibility graph.

    Also owns the transposition table shared by successive ``search_seed``
    calls: candidate bitset -> longest prefix already searched from it.
    """

    __slots__ = ("n", "out", "sym", "memo", "memo_cap")

    def __init__(self, out_masks, memo_cap=DEFAULT_MEMO_CAP):
        self.n = len(out_masks)
        self.out = list(out_masks)
        self.memo = {}
        self.memo_cap = memo_cap
        inn = [0] * self.n
        for i, m in enumerate(self.out):
            bit = 1 << i
            while m:
                low = m & -m
                inn[low.bit_length() - 1] |= bit
                m ^= low
        self.sym = [o | x for o, x in zip(self.out, inn)]


def prepare(out_masks, memo_cap=DEFAULT_MEMO_CAP) -> Graph:
    return Graph(out_masks, memo_cap)


def and_popcount_matrix(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """``C[i, j] = popcount(A[i] & B[j])`` for packed uint64 row bitsets."""
    out = np.zeros((A.shape[0], B.shape[0]), dtype=np.int64)
    for i in range(A.shape[0]):
        out[i] = np.bitwise_count(A[i][None, :] & B).sum(axis=1)
    return out


def _bits(m: int):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def greedy_colors(sym, C: int, limit: int) -> int:
    """Greedy colour classes of the symmetrised graph on ``C``.

    Stops once more than ``limit`` classes are needed.
    """
    colors = 0
    U = C
    while U and colors <= limit:
        colors += 1
        Q = U
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            U &= ~low
            Q &= ~low & ~sym[v]
    return colors


def search_seed(g: Graph, seed: int, best: int, budget: int, threshold: int):
    """Branch and bound over sequences that start with ``seed``.

    Returns ``(best, seq, expanded, prunes_bound, prunes_child, prunes_memo,
    completed)`` where ``seq`` is empty unless a sequence longer than the
    incoming ``best`` was found.

    The candidate set after a prefix depends only on the prefix as a set, so
    reaching a candidate set already searched from an equally long or
    longer prefix cannot improve ``best``.
    """
    out, sym, memo, memo_cap = g.out, g.sym, g.memo, g.memo_cap
    # best, best_seq, expanded, prunes_bound, prunes_child, prunes_memo
    state = [best, [], 0, 0, 0, 0]
    seq = [seed]

    class _Abort(Exception):
        pass

    def dfs(C: int) -> None:
        state[2] += 1
        if state[2] > budget:
            raise _Abort
        k = len(seq)
        if not C:
            if k > state[0]:
                state[0] = k
                state[1] = list(seq)
            return
        seen = memo.get(C, -1)
        if seen >= k:
            state[5] += 1
            return
        if seen >= 0 or len(memo) < memo_cap:
            memo[C] = k
        cnt = C.bit_count()
        limit = state[0] - k
        if cnt <= limit:
            state[3] += 1
            return
        if cnt > threshold and greedy_colors(sym, C, limit) <= limit:
            state[3] += 1
            return
        order = sorted((-(out[c] & C).bit_count(), c) for c in _bits(C))
        for pos, (negdeg, c) in enumerate(order):
            if k + 1 - negdeg <= state[0]:
                state[4] += len(order) - pos
                break
            seq.append(c)
            dfs(C & out[c])
            seq.pop()

    try:
        dfs(out[seed])
        completed = True
    except _Abort:
        completed = False
        state[2] = budget
        memo.clear()  # entries from the unfinished subtree are not exhaustive
    return (state[0], state[1], state[2], state[3], state[4], state[5], completed)
