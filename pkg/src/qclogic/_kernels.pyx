# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; mirrors ``_kernels_py``. Cube masks are limited to 64 bits."""
import time

import numpy as np

from libc.stdint cimport int8_t, uint8_t, uint64_t

cdef double _EPS = 1e-9


def simulate(kinds, targets, pos, neg, inputs):
    cdef const uint8_t[:] kv = np.ascontiguousarray(kinds, dtype=np.uint8)
    cdef const uint8_t[:] tv = np.ascontiguousarray(targets, dtype=np.uint8)
    cdef const uint64_t[:] pv = np.ascontiguousarray(pos, dtype=np.uint64)
    cdef const uint64_t[:] nv = np.ascontiguousarray(neg, dtype=np.uint64)
    cdef const uint64_t[:] iv = np.ascontiguousarray(inputs, dtype=np.uint64)
    cdef Py_ssize_t m = iv.shape[0]
    cdef Py_ssize_t g = kv.shape[0]
    cdef Py_ssize_t i, j
    out = np.empty(m, dtype=np.uint64)
    signs = np.empty(m, dtype=np.int8)
    cdef uint64_t[:] ov = out
    cdef int8_t[:] sv = signs
    cdef uint64_t s
    cdef int8_t sg
    with nogil:
        for i in range(m):
            s = iv[i]
            sg = 1
            for j in range(g):
                if (s & pv[j]) == pv[j] and (s & nv[j]) == 0:
                    if kv[j] == 0:
                        s ^= (<uint64_t>1) << tv[j]
                    else:
                        sg = -sg
            ov[i] = s
            sv[i] = sg
    return out, signs


cdef class _Search:
    cdef uint64_t[:] masks
    cdef double[:] costs
    cdef int[:] cov_start
    cdef int[:] cov_idx
    cdef uint8_t[:] in_cover
    cdef int[:] stack
    cdef int[:] bx
    cdef int[:] bc
    cdef int max_depth
    cdef bint collect
    cdef double best_cost
    cdef double mincost
    cdef long nodes
    cdef long node_limit
    cdef double deadline
    cdef bint aborted
    cdef object best
    cdef list sols
    cdef list sol_costs

    cdef void record(self, int depth, double cost):
        sel = tuple(sorted([self.stack[k] for k in range(depth)]))
        if self.collect:
            self.sols.append(sel)
            self.sol_costs.append(cost)
            return
        if self.best is None or cost < self.best_cost - _EPS or (
                abs(cost - self.best_cost) <= _EPS and sel < self.best):
            self.best = sel
            self.best_cost = cost

    cdef void dfs(self, uint64_t w, int depth, double cost):
        cdef int x, k, c, j
        cdef uint64_t mc, w2
        cdef double nc, limit
        cdef bint last, bad
        if self.aborted:
            return
        self.nodes += 1
        if self.node_limit and self.nodes > self.node_limit:
            self.aborted = True
            return
        if self.deadline and (self.nodes & 0x3FFF) == 0 and time.monotonic() > self.deadline:
            self.aborted = True
            return
        if w == 0:
            self.record(depth, cost)
            return
        if depth == self.max_depth:
            return
        x = 0
        while not ((w >> x) & 1):
            x += 1
        last = depth + 1 == self.max_depth
        limit = self.best_cost
        for k in range(self.cov_start[x], self.cov_start[x + 1]):
            c = self.cov_idx[k]
            if self.in_cover[c]:
                continue
            mc = self.masks[c]
            bad = False
            for j in range(depth):
                if c <= self.bc[j] and (mc >> self.bx[j]) & 1:
                    bad = True
                    break
            if bad:
                continue
            nc = cost + self.costs[c]
            w2 = w ^ mc
            if last and w2:
                continue
            if nc > limit + _EPS or (w2 and nc + self.mincost > limit + _EPS):
                continue
            self.stack[depth] = c
            self.bx[depth] = x
            self.bc[depth] = c
            self.in_cover[c] = 1
            self.dfs(w2, depth + 1, nc)
            self.in_cover[c] = 0
            if not self.collect:
                limit = self.best_cost


def cover_search(masks, costs, target, n_inputs, max_depth, bound, collect=False,
                 node_limit=0, deadline=0.0):
    if n_inputs > 64:
        raise ValueError("compiled cover_search handles at most 64 assignments")
    mask_arr = np.array([int(m) for m in masks], dtype=np.uint64)
    cost_arr = np.array(costs, dtype=np.float64)
    covering = [[] for _ in range(n_inputs)]
    for c, m in enumerate(masks):
        m = int(m)
        while m:
            low = m & -m
            covering[low.bit_length() - 1].append(c)
            m ^= low
    starts = np.zeros(n_inputs + 1, dtype=np.intc)
    for x in range(n_inputs):
        starts[x + 1] = starts[x] + len(covering[x])
    flat = np.array([c for lst in covering for c in lst], dtype=np.intc)

    cdef _Search s = _Search()
    s.masks = mask_arr
    s.costs = cost_arr
    s.cov_start = starts
    s.cov_idx = flat if len(flat) else np.zeros(1, dtype=np.intc)
    s.in_cover = np.zeros(max(len(mask_arr), 1), dtype=np.uint8)
    depth = max(int(max_depth), 1)
    s.stack = np.zeros(depth, dtype=np.intc)
    s.bx = np.zeros(depth, dtype=np.intc)
    s.bc = np.zeros(depth, dtype=np.intc)
    s.max_depth = int(max_depth)
    s.collect = bool(collect)
    s.best_cost = float(bound)
    s.mincost = float(cost_arr.min()) if len(cost_arr) else 0.0
    s.nodes = 0
    s.node_limit = int(node_limit)
    s.deadline = float(deadline)
    s.aborted = False
    s.best = None
    s.sols = []
    s.sol_costs = []
    s.dfs(<uint64_t>int(target), 0, 0.0)
    if not s.collect and s.best is not None:
        s.sols.append(s.best)
        s.sol_costs.append(s.best_cost)
    return s.sols, s.sol_costs, s.nodes, not s.aborted
