# cython: language_level=3, boundscheck=False, wraparound=False
# distutils: language = c++
"""Compiled minimax search over sets of family members packed into uint64 masks."""

from libc.stdint cimport uint64_t
from cython.operator cimport dereference as deref
from libcpp.unordered_map cimport unordered_map

import numpy as np

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil

cdef enum:
    UNSOLVABLE = 1 << 20


cdef class MinimaxSolver:
    """Exact worst-case query depth for every member subset.

    ``value_masks[q, v]`` is the set of members answering ``v`` to query ``q``;
    ``label_masks[i]`` is the set of members sharing member ``i``'s solution.
    """

    cdef uint64_t[:, ::1] _values
    cdef uint64_t[::1] _labels
    cdef unordered_map[uint64_t, int] _memo
    cdef int _nq, _nv

    def __init__(self, value_masks, label_masks):
        vm = np.ascontiguousarray(value_masks, dtype=np.uint64)
        if vm.ndim != 2:
            raise ValueError("value_masks must be 2-D")
        self._values = vm
        self._labels = np.ascontiguousarray(label_masks, dtype=np.uint64)
        self._nq = vm.shape[0]
        self._nv = vm.shape[1]

    def depth(self, mask):
        """Depth for the member set ``mask``; -1 if members cannot be told apart."""
        cdef int d = self._depth(<uint64_t>mask)
        return -1 if d >= UNSOLVABLE else d

    def memo_size(self):
        return self._memo.size()

    cdef int _depth(self, uint64_t mask):
        cdef unordered_map[uint64_t, int].iterator it
        cdef int best = UNSOLVABLE
        cdef int worst, d, q, v
        cdef uint64_t child
        cdef bint useful
        if mask == 0 or (mask & ~self._labels[__builtin_ctzll(mask)]) == 0:
            return 0
        it = self._memo.find(mask)
        if it != self._memo.end():
            return deref(it).second
        for q in range(self._nq):
            worst = 0
            useful = True
            for v in range(self._nv):
                child = mask & self._values[q, v]
                if child == 0:
                    continue
                if child == mask:
                    useful = False
                    break
                d = self._depth(child) + 1
                if d > worst:
                    worst = d
                if worst >= best:
                    break
            if useful and worst < best:
                best = worst
                if best == 1:
                    break
        self._memo[mask] = best
        return best
