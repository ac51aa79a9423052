"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--functions 40] [--repeat 3]

Times exhaustive simulation of synthesized circuits and exact cover search
on random 4-variable functions, and checks that both backends agree.
"""
import argparse
import random
import time

import numpy as np

from qclogic import kernels
from qclogic.circuit import Kind, cover_to_circuit, decompose
from qclogic.logic import TruthTable, minterm_cover
from qclogic.minimizer import SearchConfig, search_exact
from qclogic.simulator import compile_ops


def _best_of(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_simulate(backend, circuits, repeat):
    def go():
        outs = []
        for ops, inputs in circuits:
            outs.append(kernels.simulate(*ops, inputs, backend=backend))
        return outs
    return _best_of(go, repeat)


def bench_search(backend, tables, parity, repeat):
    cfg = SearchConfig(allow_parity_cubes=parity)
    return _best_of(lambda: [search_exact(f, cfg, backend=backend).cover for f in tables], repeat)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--functions", type=int, default=40)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if kernels.BACKEND != "cython":
        raise SystemExit("compiled kernels are not built; run 'pip install -e . --no-build-isolation'")

    rng = random.Random(args.seed)
    circuits = []
    for _ in range(args.functions):
        f = TruthTable.from_mask(10, rng.getrandbits(1 << 10))
        c = decompose(cover_to_circuit(minterm_cover(f), Kind.FCNOT))
        circuits.append((compile_ops(c), np.arange(1 << c.width, dtype=np.uint64)))
    tables = [TruthTable.from_mask(4, rng.getrandbits(16)) for _ in range(args.functions)]

    rows = []
    sims = {b: bench_simulate(b, circuits, args.repeat) for b in ("python", "cython")}
    for a, b in zip(sims["python"][1], sims["cython"][1]):
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    rows.append((f"simulate n=10 minterm circuits x{args.functions}", sims["python"][0], sims["cython"][0]))
    for parity in (False, True):
        res = {b: bench_search(b, tables, parity, args.repeat) for b in ("python", "cython")}
        assert res["python"][1] == res["cython"][1]
        label = f"exact search n=4 x{args.functions}, parity {'on' if parity else 'off'}"
        rows.append((label, res["python"][0], res["cython"][0]))

    width = max(len(r[0]) for r in rows)
    print(f"{'benchmark'.ljust(width)}  {'python s':>10}  {'cython s':>10}  {'speedup':>8}")
    for label, py, cy in rows:
        print(f"{label.ljust(width)}  {py:10.4f}  {cy:10.4f}  {py / cy:7.1f}x")


if __name__ == "__main__":
    main()
