# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; behaviour and statistics match ``_pykernels`` exactly."""

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, calloc, free, qsort
from libc.string cimport memcpy, memset, memcmp

import numpy as np

BACKEND = "cython"
DEFAULT_MEMO_CAP = 1 << 22

cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long) nogil
    int ctz64 "__builtin_ctzll"(unsigned long long) nogil


cdef inline int popc(const uint64_t* a, Py_ssize_t W) noexcept nogil:
    cdef int s = 0
    cdef Py_ssize_t w
    for w in range(W):
        s += popcount64(a[w])
    return s


cdef inline int popc_and(const uint64_t* a, const uint64_t* b, Py_ssize_t W) noexcept nogil:
    cdef int s = 0
    cdef Py_ssize_t w
    for w in range(W):
        s += popcount64(a[w] & b[w])
    return s


cdef inline bint is_zero(const uint64_t* a, Py_ssize_t W) noexcept nogil:
    cdef Py_ssize_t w
    for w in range(W):
        if a[w]:
            return False
    return True


cdef inline uint64_t hash_words(const uint64_t* a, Py_ssize_t W) noexcept nogil:
    cdef uint64_t h = 0x9E3779B97F4A7C15ULL
    cdef uint64_t z
    cdef Py_ssize_t w
    for w in range(W):
        z = a[w] + h
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
        h = z ^ (z >> 31) ^ (h << 7)
    return h


cdef int cmp_int64(const void* a, const void* b) noexcept nogil:
    cdef int64_t x = (<const int64_t*>a)[0]
    cdef int64_t y = (<const int64_t*>b)[0]
    return (x > y) - (x < y)


cdef class Graph:
    """Packed out/symmetrised bitsets plus an open-addressing transposition table."""

    cdef public Py_ssize_t n
    cdef Py_ssize_t W
    cdef uint64_t* out
    cdef uint64_t* sym
    # transposition table
    cdef uint64_t* keys
    cdef int* vals
    cdef Py_ssize_t cap
    cdef Py_ssize_t used
    cdef public Py_ssize_t memo_cap

    def __cinit__(self, out_masks, memo_cap=DEFAULT_MEMO_CAP):
        cdef Py_ssize_t i, j, w
        self.n = len(out_masks)
        self.W = max(1, (self.n + 63) // 64)
        self.memo_cap = memo_cap
        self.out = <uint64_t*>calloc(self.n * self.W + 1, sizeof(uint64_t))
        self.sym = <uint64_t*>calloc(self.n * self.W + 1, sizeof(uint64_t))
        if not self.out or not self.sym:
            raise MemoryError()
        for i, m in enumerate(out_masks):
            words = np.frombuffer(int(m).to_bytes(self.W * 8, "little"), dtype="<u8")
            for w in range(self.W):
                self.out[i * self.W + w] = words[w]
        for i in range(self.n):
            for w in range(self.W):
                self.sym[i * self.W + w] |= self.out[i * self.W + w]
            for j in range(self.n):
                if (self.out[i * self.W + (j >> 6)] >> (j & 63)) & 1:
                    self.sym[j * self.W + (i >> 6)] |= (<uint64_t>1) << (i & 63)
        self.keys = NULL
        self.vals = NULL
        self._alloc_table(1024)

    def __dealloc__(self):
        free(self.out)
        free(self.sym)
        free(self.keys)
        free(self.vals)

    cdef int _alloc_table(self, Py_ssize_t cap) except -1:
        cdef Py_ssize_t i
        free(self.keys)
        free(self.vals)
        self.cap = cap
        self.used = 0
        self.keys = <uint64_t*>malloc(cap * self.W * sizeof(uint64_t))
        self.vals = <int*>malloc(cap * sizeof(int))
        if not self.keys or not self.vals:
            raise MemoryError()
        for i in range(cap):
            self.vals[i] = -1
        return 0

    cdef Py_ssize_t _slot(self, const uint64_t* key) noexcept nogil:
        cdef Py_ssize_t mask = self.cap - 1
        cdef Py_ssize_t s = <Py_ssize_t>(hash_words(key, self.W) & <uint64_t>mask)
        while self.vals[s] >= 0 and memcmp(&self.keys[s * self.W], key,
                                           self.W * sizeof(uint64_t)) != 0:
            s = (s + 1) & mask
        return s

    cdef int _grow(self) except -1:
        cdef uint64_t* old_keys = self.keys
        cdef int* old_vals = self.vals
        cdef Py_ssize_t old_cap = self.cap, i, s
        self.keys = NULL
        self.vals = NULL
        try:
            self._alloc_table(old_cap * 2)
            for i in range(old_cap):
                if old_vals[i] >= 0:
                    s = self._slot(&old_keys[i * self.W])
                    memcpy(&self.keys[s * self.W], &old_keys[i * self.W], self.W * sizeof(uint64_t))
                    self.vals[s] = old_vals[i]
                    self.used += 1
        finally:
            free(old_keys)
            free(old_vals)
        return 0

    def clear_memo(self):
        self._alloc_table(1024)

    @property
    def memo_size(self):
        return self.used


def prepare(out_masks, memo_cap=DEFAULT_MEMO_CAP):
    return Graph(out_masks, memo_cap)


def and_popcount_matrix(const uint64_t[:, ::1] A, const uint64_t[:, ::1] B):
    """``C[i, j] = popcount(A[i] & B[j])`` for packed uint64 row bitsets."""
    cdef Py_ssize_t m = A.shape[0], k = B.shape[0], W = A.shape[1], i, j
    result = np.zeros((m, k), dtype=np.int64)
    cdef int64_t[:, ::1] C = result
    if W == 0:
        return result
    with nogil:
        for i in range(m):
            for j in range(k):
                C[i, j] = popc_and(&A[i, 0], &B[j, 0], W)
    return result


cdef struct State:
    int best
    int* best_seq
    int* seq
    int64_t expanded
    int64_t budget
    int64_t prunes_bound
    int64_t prunes_child
    int64_t prunes_memo
    int threshold
    bint aborted
    uint64_t* scratch_u
    uint64_t* scratch_q


cdef class _Search:
    cdef Graph g
    cdef State st
    cdef uint64_t** lv
    cdef Py_ssize_t nlv

    def __cinit__(self, Graph g):
        self.g = g
        self.nlv = 0
        self.lv = NULL

    def __dealloc__(self):
        cdef Py_ssize_t i
        for i in range(self.nlv):
            free(self.lv[i])
        free(self.lv)

    cdef uint64_t* level(self, Py_ssize_t d) except NULL:
        cdef Py_ssize_t i
        cdef uint64_t** grown
        if d >= self.nlv:
            grown = <uint64_t**>calloc(d + 16, sizeof(uint64_t*))
            if not grown:
                raise MemoryError()
            for i in range(self.nlv):
                grown[i] = self.lv[i]
            for i in range(self.nlv, d + 16):
                grown[i] = <uint64_t*>malloc(self.g.W * sizeof(uint64_t))
                if not grown[i]:
                    raise MemoryError()
            free(self.lv)
            self.lv = grown
            self.nlv = d + 16
        return self.lv[d]

    cdef int colors(self, const uint64_t* C, int limit) noexcept:
        cdef Py_ssize_t W = self.g.W, w, v, i
        cdef uint64_t* U = self.st.scratch_u
        cdef uint64_t* Q = self.st.scratch_q
        cdef const uint64_t* sv
        cdef int colors = 0
        memcpy(U, C, W * sizeof(uint64_t))
        while not is_zero(U, W) and colors <= limit:
            colors += 1
            memcpy(Q, U, W * sizeof(uint64_t))
            w = 0
            while True:
                while w < W and Q[w] == 0:
                    w += 1
                if w == W:
                    break
                v = w * 64 + ctz64(Q[w])
                U[w] &= ~((<uint64_t>1) << (v & 63))
                Q[w] &= ~((<uint64_t>1) << (v & 63))
                sv = &self.g.sym[v * W]
                for i in range(w, W):
                    Q[i] &= ~sv[i]
        return colors

    cdef int dfs(self, Py_ssize_t k) except -1:
        """Search below the prefix ``seq[0:k]`` whose candidates are ``level(k)``."""
        cdef Graph g = self.g
        cdef Py_ssize_t W = g.W, w, s, pos, cnt, c
        cdef uint64_t* C = self.level(k)
        cdef uint64_t* child
        cdef int seen, limit, deg
        cdef int64_t* order
        cdef int64_t span = g.n + 1
        cdef uint64_t bits

        self.st.expanded += 1
        if self.st.expanded > self.st.budget:
            self.st.aborted = True
            return 0
        if is_zero(C, W):
            if k > self.st.best:
                self.st.best = <int>k
                memcpy(self.st.best_seq, self.st.seq, k * sizeof(int))
            return 0

        s = g._slot(C)
        seen = g.vals[s]
        if seen >= k:
            self.st.prunes_memo += 1
            return 0
        if seen >= 0:
            g.vals[s] = <int>k
        elif g.used < g.memo_cap:
            memcpy(&g.keys[s * W], C, W * sizeof(uint64_t))
            g.vals[s] = <int>k
            g.used += 1
            if g.used * 2 > g.cap:
                g._grow()

        cnt = popc(C, W)
        limit = self.st.best - <int>k
        if cnt <= limit:
            self.st.prunes_bound += 1
            return 0
        if cnt > self.st.threshold and self.colors(C, limit) <= limit:
            self.st.prunes_bound += 1
            return 0

        order = <int64_t*>malloc(cnt * sizeof(int64_t))
        if not order:
            raise MemoryError()
        try:
            pos = 0
            for w in range(W):
                bits = C[w]
                while bits:
                    c = w * 64 + ctz64(bits)
                    bits &= bits - 1
                    deg = popc_and(&g.out[c * W], C, W)
                    order[pos] = (span - deg) * span + c
                    pos += 1
            qsort(order, cnt, sizeof(int64_t), cmp_int64)
            child = self.level(k + 1)
            C = self.level(k)
            for pos in range(cnt):
                c = order[pos] % span
                deg = <int>(span - order[pos] // span)
                if k + 1 + deg <= self.st.best:
                    self.st.prunes_child += cnt - pos
                    break
                self.st.seq[k] = <int>c
                for w in range(W):
                    child[w] = C[w] & g.out[c * W + w]
                self.dfs(k + 1)
                if self.st.aborted:
                    break
        finally:
            free(order)
        return 0


def search_seed(Graph g, int seed, int best, int64_t budget, int threshold):
    """Branch and bound over sequences starting with ``seed``; see ``_pykernels``."""
    cdef _Search srch = _Search(g)
    cdef Py_ssize_t W = g.W, w
    cdef Py_ssize_t maxlen = g.n + 2
    srch.st.best = best
    srch.st.best_seq = <int*>calloc(maxlen, sizeof(int))
    srch.st.seq = <int*>calloc(maxlen, sizeof(int))
    srch.st.scratch_u = <uint64_t*>malloc(W * sizeof(uint64_t))
    srch.st.scratch_q = <uint64_t*>malloc(W * sizeof(uint64_t))
    srch.st.expanded = 0
    srch.st.budget = budget
    srch.st.prunes_bound = 0
    srch.st.prunes_child = 0
    srch.st.prunes_memo = 0
    srch.st.threshold = threshold
    srch.st.aborted = False
    try:
        if (not srch.st.best_seq or not srch.st.seq or not srch.st.scratch_u
                or not srch.st.scratch_q):
            raise MemoryError()
        srch.st.seq[0] = seed
        root = srch.level(1)
        for w in range(W):
            root[w] = g.out[seed * W + w]
        srch.dfs(1)
        improved = srch.st.best > best
        seq = [srch.st.best_seq[i] for i in range(srch.st.best)] if improved else []
        expanded = srch.st.expanded
        if srch.st.aborted:
            expanded = budget
            g.clear_memo()
        return (srch.st.best, seq, expanded, srch.st.prunes_bound, srch.st.prunes_child,
                srch.st.prunes_memo, not srch.st.aborted)
    finally:
        free(srch.st.best_seq)
        free(srch.st.seq)
        free(srch.st.scratch_u)
        free(srch.st.scratch_q)
