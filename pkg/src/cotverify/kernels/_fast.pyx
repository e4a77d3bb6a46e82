# cython: boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled minimax kernels over uint64 bitmask version spaces.

Mirror of kernels/pure.py for classes with at most 64 verifiers; the
selection layer falls back to the pure kernel above that size.
"""

from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector
from libc.stdint cimport uint64_t, int64_t

BACKEND = "fast"

INF_LABEL = 0

ctypedef unordered_map[uint64_t, int64_t] Memo


cdef class LdimEngine:
    cdef vector[uint64_t] masks
    cdef Memo memo
    cdef long long nodes, hits

    def __init__(self, yes_masks):
        for m in yes_masks:
            self.masks.push_back(<uint64_t> m)
        self.nodes = 0
        self.hits = 0

    cdef int64_t _value(self, uint64_t alive):
        cdef uint64_t m, y, n
        cdef int64_t best, cand
        cdef size_t i
        if alive & (alive - 1) == 0:
            return 0
        it = self.memo.find(alive)
        if it != self.memo.end():
            self.hits += 1
            return (<int64_t> self.memo[alive])
        self.nodes += 1
        best = 0
        for i in range(self.masks.size()):
            y = self.masks[i] & alive
            if y == 0 or y == alive:
                continue
            n = alive & ~self.masks[i]
            cand = self._value(y)
            if self._value(n) < cand:
                cand = self._value(n)
            cand += 1
            if cand > best:
                best = cand
        self.memo[alive] = best
        return best

    def value(self, alive):
        return self._value(<uint64_t> alive)

    def stats(self):
        return (self.nodes, self.hits)


cdef class ScEngine:
    cdef vector[uint64_t] masks
    cdef vector[Memo] memos  # one memo table per remaining budget
    cdef long long nodes, hits

    def __init__(self, yes_masks):
        for m in yes_masks:
            self.masks.push_back(<uint64_t> m)
        self.nodes = 0
        self.hits = 0

    cdef int64_t _value(self, uint64_t alive, int k):
        cdef uint64_t y
        cdef int64_t best, cand, straight
        cdef size_t i
        if alive & (alive - 1) == 0:
            return 0
        while <size_t> k >= self.memos.size():
            self.memos.push_back(Memo())
        it = self.memos[k].find(alive)
        if it != self.memos[k].end():
            self.hits += 1
            return self.memos[k][alive]
        self.nodes += 1
        best = 0
        for i in range(self.masks.size()):
            y = self.masks[i] & alive
            if y == 0 or y == alive:
                continue
            cand = 1 + self._value(y, k)
            if k > 0:
                straight = 1 + self._value(alive & ~self.masks[i], k - 1)
                if straight < cand:
                    cand = straight
            if cand > best:
                best = cand
        self.memos[k][alive] = best
        return best

    def value(self, alive, k):
        return self._value(<uint64_t> alive, <int> k)

    def stats(self):
        return (self.nodes, self.hits)


cdef class WscEngine:
    cdef vector[uint64_t] masks
    cdef Memo memo
    cdef int64_t ws, wc
    cdef long long nodes, hits

    def __init__(self, yes_masks, ws, wc):
        for m in yes_masks:
            self.masks.push_back(<uint64_t> m)
        self.ws = <int64_t> ws
        self.wc = <int64_t> wc
        self.nodes = 0
        self.hits = 0

    cdef int64_t _value(self, uint64_t alive):
        cdef uint64_t y
        cdef int64_t best, cand, other
        cdef size_t i
        if alive & (alive - 1) == 0:
            return 0
        it = self.memo.find(alive)
        if it != self.memo.end():
            self.hits += 1
            return self.memo[alive]
        self.nodes += 1
        best = 0
        for i in range(self.masks.size()):
            y = self.masks[i] & alive
            if y == 0 or y == alive:
                continue
            cand = self.ws + self._value(alive & ~self.masks[i])
            other = self.wc + self._value(y)
            if other < cand:
                cand = other
            if cand > best:
                best = cand
        self.memo[alive] = best
        return best

    def value(self, alive):
        return self._value(<uint64_t> alive)

    def stats(self):
        return (self.nodes, self.hits)


cdef class SclEngine:
    # Flattened (label, mask) pairs: instance i owns entries
    # offsets[i] .. offsets[i+1].
    cdef vector[int] labels
    cdef vector[uint64_t] masks
    cdef vector[size_t] offsets
    cdef Memo memo
    cdef int64_t ws, wc, wl
    cdef long long nodes, hits

    def __init__(self, label_masks, ws, wc, wl):
        self.offsets.push_back(0)
        for pairs in label_masks:
            for label, m in pairs:
                self.labels.push_back(<int> label)
                self.masks.push_back(<uint64_t> m)
            self.offsets.push_back(self.labels.size())
        self.ws = <int64_t> ws
        self.wc = <int64_t> wc
        self.wl = <int64_t> wl
        self.nodes = 0
        self.hits = 0

    cdef int64_t _value(self, uint64_t alive):
        cdef int64_t best, cand, inf_val, vi, vj
        cdef uint64_t sub, inf_mask
        cdef size_t inst, a, b, fi, fj
        cdef vector[uint64_t] faults
        if alive & (alive - 1) == 0:
            return 0
        it = self.memo.find(alive)
        if it != self.memo.end():
            self.hits += 1
            return self.memo[alive]
        self.nodes += 1
        best = 0
        for inst in range(self.offsets.size() - 1):
            a = self.offsets[inst]
            b = self.offsets[inst + 1]
            faults.clear()
            inf_mask = 0
            for fi in range(a, b):
                sub = self.masks[fi] & alive
                if sub == 0:
                    continue
                if sub == alive:
                    # All alive verifiers agree here; no branch possible.
                    faults.clear()
                    inf_mask = 0
                    break
                if self.labels[fi] == 0:
                    inf_mask = sub
                else:
                    faults.push_back(sub)
            if inf_mask != 0:
                inf_val = self._value(inf_mask)
                for fi in range(faults.size()):
                    cand = self.ws + self._value(faults[fi])
                    if self.wc + inf_val < cand:
                        cand = self.wc + inf_val
                    if cand > best:
                        best = cand
            for fi in range(faults.size()):
                vi = self._value(faults[fi])
                for fj in range(fi + 1, faults.size()):
                    vj = self._value(faults[fj])
                    cand = self.wl + (vi if vi < vj else vj)
                    if cand > best:
                        best = cand
        self.memo[alive] = best
        return best

    def value(self, alive):
        return self._value(<uint64_t> alive)

    def stats(self):
        return (self.nodes, self.hits)
