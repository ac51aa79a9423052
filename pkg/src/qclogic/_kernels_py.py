"""Pure-Python kernels; same API as the compiled ``_kernels`` module."""
from __future__ import annotations

import time

import numpy as np

_EPS = 1e-9


def simulate(kinds, targets, pos, neg, inputs):
    """Run compiled ops on every basis state in ``inputs``.

    Op ``j`` fires when ``state & pos[j] == pos[j]`` and ``state & neg[j] == 0``;
    kind 0 then flips bit ``targets[j]``, kind 1 negates the sign.
    Returns ``(outputs uint64, signs int8)``.
    """
    s = np.array(inputs, dtype=np.uint64, copy=True)
    neg_sign = np.zeros(s.shape, dtype=bool)
    one = np.uint64(1)
    for k, t, p, q in zip(kinds, targets, pos, neg):
        p, q = np.uint64(p), np.uint64(q)
        fire = ((s & p) == p) & ((s & q) == 0)
        if k == 0:
            s ^= fire.astype(np.uint64) << np.uint64(t)
        else:
            neg_sign ^= fire
    return s, np.where(neg_sign, -1, 1).astype(np.int8)


def _covering(masks, n_inputs):
    cov = [[] for _ in range(n_inputs)]
    for c, m in enumerate(masks):
        m = int(m)
        while m:
            low = m & -m
            cov[low.bit_length() - 1].append(c)
            m ^= low
    return cov


def cover_search(masks, costs, target, n_inputs, max_depth, bound, collect=False,
                 node_limit=0, deadline=0.0):
    """Depth-first parity-cover search.

    Branches on the lowest assignment whose parity is still wrong, over the
    cubes covering it. Each cube set is reached along exactly one path: when
    cube ``c`` is chosen for assignment ``x``, later choices covering ``x``
    must have a larger index.

    In optimize mode returns the cheapest cover with cost <= ``bound`` (ties go
    to the lexicographically smallest sorted index tuple); in collect mode
    every cover with cost <= ``bound``.

    Returns ``(solutions, solution_costs, nodes, complete)``.
    """
    masks = [int(m) for m in masks]
    costs = [float(c) for c in costs]
    covering = _covering(masks, n_inputs)
    mincost = min(costs) if costs else 0.0
    chosen: list[int] = []
    in_cover = [False] * len(masks)
    branches: list[tuple[int, int]] = []
    state = {"nodes": 0, "aborted": False, "best": None, "best_cost": float(bound)}
    sols: list[tuple[int, ...]] = []
    sol_costs: list[float] = []

    def record(cost):
        sel = tuple(sorted(chosen))
        if collect:
            sols.append(sel)
            sol_costs.append(cost)
            return
        best = state["best"]
        if best is None or cost < state["best_cost"] - _EPS or (
                abs(cost - state["best_cost"]) <= _EPS and sel < best):
            state["best"] = sel
            state["best_cost"] = cost

    def dfs(w, depth, cost):
        if state["aborted"]:
            return
        state["nodes"] += 1
        if node_limit and state["nodes"] > node_limit:
            state["aborted"] = True
            return
        if deadline and (state["nodes"] & 0x3FFF) == 0 and time.monotonic() > deadline:
            state["aborted"] = True
            return
        if w == 0:
            record(cost)
            return
        if depth == max_depth:
            return
        x = (w & -w).bit_length() - 1
        last = depth + 1 == max_depth
        limit = state["best_cost"]
        for c in covering[x]:
            if in_cover[c]:
                continue
            mc = masks[c]
            if any(c <= cj and (mc >> xj) & 1 for xj, cj in branches):
                continue
            nc = cost + costs[c]
            w2 = w ^ mc
            if last and w2:
                continue
            if nc > limit + _EPS or (w2 and nc + mincost > limit + _EPS):
                continue
            chosen.append(c)
            in_cover[c] = True
            branches.append((x, c))
            dfs(w2, depth + 1, nc)
            branches.pop()
            in_cover[c] = False
            chosen.pop()
            if not collect:
                limit = state["best_cost"]

    dfs(int(target), 0, 0.0)
    if not collect:
        if state["best"] is not None:
            sols.append(state["best"])
            sol_costs.append(state["best_cost"])
    return sols, sol_costs, state["nodes"], not state["aborted"]
