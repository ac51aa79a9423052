"""Acceptance criteria, each at its stated tolerance and time limit."""
import random
import time

import numpy as np
import pytest

from qclogic.circuit import (
    CNot,
    Circuit,
    Hadamard,
    Kind,
    RGate,
    cover_to_circuit,
    decompose,
    emit,
    rgate_decompose,
)
from qclogic.hardware import HardwareModel, circuit_cost, enumerate_pareto, select_variant
from qclogic.logic import Cube, ParityCover, TruthTable, all_cubes, cover_validate, minterm_cover
from qclogic.minimizer import (
    Mode,
    SearchConfig,
    minimize_exact,
    minimize_heuristic,
    rule1_merge,
    rule2_merge,
)
from qclogic.simulator import (
    StateVector,
    compare_tables,
    equivalent,
    extract_function,
    run_statevector,
    simulate_states,
)

MINTERMS = ParityCover.parse(3, "010", "011", "101", "110")
PARITY_FORM = ParityCover.parse(3, "-10", "^^1")
TWO_TERM = ParityCover.parse(3, "-1-", "1-1")
U_PRIME = ParityCover.parse(3, "01-", "-10", "101")
PATH = HardwareModel.from_edges(["x1", "x2", "x3"], [("x1", "x2"), ("x2", "x3")])


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


@pytest.mark.criterion(1, "f_b example: naive minterm form, exact two-term form, parity form in Pareto list")
def test_f_b_example(f_b):
    with Timer() as t:
        naive = minterm_cover(f_b)
        assert naive == MINTERMS
        assert emit(cover_to_circuit(naive, Kind.FCNOT)) == (
            "circuit fcnot vars 3\n"
            "L -x1 +x2 -x3 ; y\n"
            "L -x1 +x2 +x3 ; y\n"
            "L +x1 -x2 +x3 ; y\n"
            "L +x1 +x2 -x3 ; y\n")
        best = minimize_exact(f_b, SearchConfig(allow_parity_cubes=False))
        assert best == TWO_TERM and len(best) == 2
        assert emit(cover_to_circuit(best, Kind.FCNOT)) == "circuit fcnot vars 3\nL +x2 ; y\nL +x1 +x3 ; y\n"
        pareto = enumerate_pareto(f_b, Kind.FCNOT, HardwareModel.complete(3), allow_parity_cubes=True)
        assert PARITY_FORM in pareto.covers()
        assert emit(cover_to_circuit(PARITY_FORM, Kind.FCNOT)) == (
            "circuit fcnot vars 3\nL +x2 -x3 ; y\nCNOT x1 x2\nL +x2 +x3 ; y\nCNOT x1 x2\n")
    assert t.elapsed < 1.0


@pytest.mark.criterion(2, "equivalence chain minterm form = parity form = two-term form; U' differs at x=010")
def test_equivalence_chain(f_b):
    with Timer() as t:
        circuits = [cover_to_circuit(c, Kind.FCNOT) for c in (MINTERMS, PARITY_FORM, TWO_TERM)]
        for a in circuits:
            assert compare_tables(f_b, extract_function(a))
            for b in circuits:
                assert equivalent(a, b)
        res = equivalent(cover_to_circuit(U_PRIME, Kind.FCNOT), circuits[2])
        assert not res
        assert str(res.witness) == "010"
    assert t.elapsed < 1.0


@pytest.mark.criterion(3, "hardware selection on path x1-x2-x3 picks parity form; swaps 2 vs 0")
def test_hardware_selection(f_b):
    with Timer() as t:
        sel = select_variant(f_b, Kind.FCPS, PATH, [TWO_TERM, PARITY_FORM])
        assert sel.cover == PARITY_FORM
        assert select_variant(f_b, Kind.FCPS, PATH).cover == PARITY_FORM
        assert circuit_cost(cover_to_circuit(TWO_TERM, Kind.FCPS), PATH).swap_count == 2
        assert circuit_cost(cover_to_circuit(PARITY_FORM, Kind.FCPS), PATH).swap_count == 0
    assert t.elapsed < 1.0


@pytest.mark.criterion(4, "phase kickback of the two-term form circuit within 1e-12")
def test_phase_kickback(f_b):
    circ = decompose(cover_to_circuit(TWO_TERM, Kind.FCNOT))
    minus = np.array([1, -1]) / np.sqrt(2)
    for x in range(8):
        ctrl = np.zeros(8)
        ctrl[x] = 1
        psi = StateVector(np.kron(ctrl, minus), 4)
        out = run_statevector(circ, psi).amplitudes
        expected = (-1) ** f_b.values[x] * psi.amplitudes
        assert np.max(np.abs(out - expected)) <= 1e-12


def _cubes_up_to(nvars):
    for n in range(1, nvars + 1):
        for c in all_cubes(n):
            if c.variables():
                yield c


@pytest.mark.criterion(5, "rgate_decompose matches the R gate diagonal within 1e-12")
def test_rgate_construction():
    checked = 0
    for cube in _cubes_up_to(4):
        positives = [v for v in cube.variables() if cube.pla()[v - 1] == "1"]
        if not positives:
            continue
        diag = np.where(cube.truth_vector().astype(bool), -1.0, 1.0)
        for pivot in positives:
            circ = Circuit(cube.n, Kind.FCPS, tuple(rgate_decompose(RGate(cube), pivot)))
            for x in range(1 << cube.n):
                out = run_statevector(circ, StateVector.basis(cube.n, x)).amplitudes
                want = np.zeros(1 << cube.n)
                want[x] = diag[x]
                assert np.max(np.abs(out - want)) <= 1e-12, (cube, pivot, x)
        checked += 1
    assert checked > 0


def _brute_force_minimum_counts(n):
    """Minimum XOR cover size for every n-variable function, by BFS over cube XORs."""
    masks = []
    for pla in _pla_strings(n):
        m = 0
        for idx in range(1 << n):
            bits = format(idx, f"0{n}b")
            if all(p == "-" or p == b for p, b in zip(pla, bits)):
                m |= 1 << idx
        masks.append(m)
    dist = {0: 0}
    frontier = [0]
    k = 0
    while frontier:
        k += 1
        nxt = []
        for f in frontier:
            for m in masks:
                g = f ^ m
                if g not in dist:
                    dist[g] = k
                    nxt.append(g)
        frontier = nxt
    return dist


def _pla_strings(n):
    if n == 0:
        yield ""
        return
    for rest in _pla_strings(n - 1):
        for ch in "01-":
            yield ch + rest


@pytest.mark.criterion(6, "exact minimizer matches brute force on all 256 three-variable functions")
def test_exhaustive_optimality():
    with Timer() as t:
        oracle = _brute_force_minimum_counts(3)
        assert len(oracle) == 256
        cfg = SearchConfig(allow_parity_cubes=False)
        for mask in range(256):
            f = TruthTable.from_mask(3, mask)
            cover = minimize_exact(f, cfg)
            assert cover_validate(cover, f)
            assert len(cover) == oracle[mask], (mask, cover)
    assert t.elapsed < 60.0


def _random_tables(n, count, rng):
    return [TruthTable.from_mask(n, rng.getrandbits(1 << n)) for _ in range(count)]


def _restores_and_squares(circ):
    """Control register restored on every input; FCNOT circuits are involutions."""
    f = extract_function(circ)
    if circ.kind is Kind.FCNOT:
        doubled = decompose(circ) + decompose(circ)
        states = np.arange(1 << circ.width, dtype=np.uint64)
        out, signs = simulate_states(doubled, states)
        assert np.array_equal(out, states) and (signs == 1).all()
    return f


@pytest.mark.criterion(7, "property suites at n = 4, 6, 8 (500 functions each) and 10^4 merge trials")
@pytest.mark.parametrize("n", [4, 6, 8])
def test_property_suite(n):
    rng = random.Random(1000 + n)
    heur = SearchConfig(mode=Mode.HEURISTIC)
    failures = 0
    for f in _random_tables(n, 500, rng):
        covers = [minterm_cover(f), minimize_heuristic(f, heur)]
        if n == 4:
            covers.append(minimize_exact(f))
        for cov in covers:
            if not cover_validate(cov, f):
                failures += 1
                continue
            for kind in Kind:
                circ = cover_to_circuit(cov, kind)
                if not compare_tables(f, _restores_and_squares(circ)):
                    failures += 1
                if kind is Kind.FCNOT and not compare_tables(f, _restores_and_squares(decompose(circ))):
                    failures += 1
    assert failures == 0


def _random_cube(n, rng, allow_parity):
    pla = [rng.choice("01-") for _ in range(n)]
    if allow_parity and n >= 2 and rng.random() < 0.3:
        a, b = rng.sample(range(n), 2)
        ch = rng.choice("^=")
        pla[a] = pla[b] = ch
    return Cube.from_pla("".join(pla))


@pytest.mark.criterion(7, "property suites at n = 4, 6, 8 (500 functions each) and 10^4 merge trials")
def test_merge_rules_preserve_xor():
    rng = random.Random(7)
    merged = [0, 0]
    for trial in range(10_000):
        n = rng.randint(1, 6)
        c1 = _random_cube(n, rng, False)
        if rng.random() < 0.5:
            # steer towards mergeable pairs
            pla = list(c1.pla())
            for i in rng.sample(range(n), min(n, rng.randint(1, 2))):
                pla[i] = rng.choice([ch for ch in "01" if ch != pla[i]] or ["0"])
            c2 = Cube.from_pla("".join(pla))
        else:
            c2 = _random_cube(n, rng, False)
        xor = c1.truth_vector() ^ c2.truth_vector()
        for i, rule in enumerate((rule1_merge, rule2_merge)):
            m = rule(c1, c2)
            if m is not None:
                merged[i] += 1
                assert np.array_equal(m.truth_vector(), xor), (rule.__name__, c1, c2, m)
    assert merged[0] > 100 and merged[1] > 100
