"""Hardware-aware costing and circuit-variant selection.

A gate whose qubits are not pairwise coupled is charged swap chains along
shortest paths, once to bring the qubits together and once to restore
them. This is an estimate for ranking variants, not a router.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field

from .circuit import (
    CNot,
    Circuit,
    Hadamard,
    Kind,
    Not,
    Toffoli,
    cover_to_circuit,
    cube_gates,
    decompose,
    emit,
    gate_text,
    qubit_name,
)
from .logic import ArityError, Cube, ParityCover, TruthTable, cover_validate
from .minimizer import (
    EXACT_GUARANTEED_ARITY,
    Mode,
    SearchConfig,
    enumerate_covers,
    minimize_heuristic,
    search_exact,
    unit_cost,
)


class HardwareError(ValueError):
    pass


@dataclass(frozen=True)
class Weights:
    not_: float = 1.0
    cnot: float = 1.0
    h: float = 1.0
    swap: float | None = None
    tof: dict[int, float] = field(default_factory=dict)

    def toffoli(self, m: int) -> float:
        if m == 1:
            return self.cnot
        return self.tof.get(m, 2.0 * m - 1.0)

    @property
    def swap_cost(self) -> float:
        return 3.0 * self.cnot if self.swap is None else self.swap

    def __hash__(self):
        return hash((self.not_, self.cnot, self.h, self.swap, tuple(sorted(self.tof.items()))))


@dataclass(frozen=True)
class HardwareModel:
    qubits: tuple[str, ...]
    couplings: frozenset[frozenset[str]]
    weights: Weights = Weights()

    def __post_init__(self):
        known = set(self.qubits)
        for e in self.couplings:
            if len(e) != 2:
                raise HardwareError(f"edge {sorted(e)} must join two distinct qubits")
            if not e <= known:
                raise HardwareError(f"edge {sorted(e)} references an unknown qubit")
        w = self.weights
        if min(w.not_, w.cnot, w.h, w.swap_cost, *w.tof.values()) < 0:
            raise HardwareError("weights must be non-negative")

    @classmethod
    def complete(cls, n: int, with_y: bool = True, weights: Weights = Weights()) -> HardwareModel:
        names = [f"x{i}" for i in range(1, n + 1)] + (["y"] if with_y else [])
        edges = frozenset(frozenset(p) for p in itertools.combinations(names, 2))
        return cls(tuple(names), edges, weights)

    @classmethod
    def from_edges(cls, qubits, edges, weights: Weights = Weights()) -> HardwareModel:
        return cls(tuple(qubits), frozenset(frozenset(e) for e in edges), weights)

    def adjacent(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self.couplings

    def is_connected(self) -> bool:
        if not self.qubits:
            return True
        return len(self._bfs(self.qubits[0])) == len(self.qubits)

    def _bfs(self, src: str) -> dict[str, int]:
        nbrs: dict[str, list[str]] = {q: [] for q in self.qubits}
        for e in self.couplings:
            a, b = sorted(e)
            nbrs[a].append(b)
            nbrs[b].append(a)
        dist = {src: 0}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for v in nbrs[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return dist

    def distances(self) -> dict[str, dict[str, int]]:
        return {q: self._bfs(q) for q in self.qubits}


def parse_hardware(text: str) -> HardwareModel:
    """Parse ``qubit``/``edge``/``weight`` lines; unspecified weights keep defaults."""
    qubits: list[str] = []
    edges: list[tuple[str, str]] = []
    wkw: dict = {}
    tof: dict[int, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "qubit" and len(parts) == 2:
                if parts[1] not in qubits:
                    qubits.append(parts[1])
            elif parts[0] == "edge" and len(parts) == 3:
                if parts[1] == parts[2]:
                    raise HardwareError(f"line {lineno}: self-loop on {parts[1]}")
                edges.append((parts[1], parts[2]))
            elif parts[0] == "weight" and len(parts) == 3 and parts[1] in ("not", "cnot", "h", "swap"):
                wkw[{"not": "not_"}.get(parts[1], parts[1])] = float(parts[2])
            elif parts[0] == "weight" and len(parts) == 4 and parts[1] == "tof":
                m = int(parts[2])
                if m < 1:
                    raise HardwareError(f"line {lineno}: control count must be positive")
                tof[m] = float(parts[3])
            else:
                raise HardwareError(f"line {lineno}: cannot parse {line!r}")
        except ValueError as exc:
            if isinstance(exc, HardwareError):
                raise
            raise HardwareError(f"line {lineno}: {exc}") from exc
    for a, b in edges:
        for q in (a, b):
            if q not in qubits:
                qubits.append(q)
    return HardwareModel(tuple(qubits), frozenset(frozenset(e) for e in edges), Weights(tof=tof, **wkw))


@dataclass(frozen=True)
class CostReport:
    total: float
    breakdown: dict[str, float]
    counts: dict[str, int]
    swap_count: int
    swap_cost: float
    missing: tuple[tuple[str, str, str, int], ...] = ()

    def format(self) -> str:
        lines = [f"total {_num(self.total)}"]
        for name in sorted(self.breakdown):
            lines.append(f"gate {name} count {self.counts[name]} cost {_num(self.breakdown[name])}")
        lines.append(f"swaps {self.swap_count} cost {_num(self.swap_cost)}")
        for gate, a, b, d in self.missing:
            lines.append(f"missing {gate} needs {a}-{b} distance {d}")
        return "\n".join(lines) + "\n"


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


_KIND_NAMES = {Not: "NOT", CNot: "CNOT", Toffoli: "TOF", Hadamard: "H"}


def circuit_cost(c: Circuit, hw: HardwareModel) -> CostReport:
    if not hw.is_connected():
        raise HardwareError("coupling graph is disconnected; routing is undefined")
    known = set(hw.qubits)
    w = hw.weights
    dist = hw.distances()
    breakdown: dict[str, float] = {}
    counts: dict[str, int] = {}
    swaps = 0
    missing = []
    for g in decompose(c).gates:
        names = [qubit_name(q) for q in g.qubits]
        for q in names:
            if q not in known:
                raise HardwareError(f"qubit {q} is not in the hardware model")
        kind = _KIND_NAMES[type(g)]
        if isinstance(g, Not):
            cost = w.not_
        elif isinstance(g, Hadamard):
            cost = w.h
        elif isinstance(g, CNot):
            cost = w.cnot
        else:
            cost = w.toffoli(len(g.controls))
        breakdown[kind] = breakdown.get(kind, 0.0) + cost
        counts[kind] = counts.get(kind, 0) + 1
        for a, b in itertools.combinations(names, 2):
            if not hw.adjacent(a, b):
                d = dist[a][b]
                swaps += 2 * (d - 1)
                missing.append((gate_text(g), *sorted((a, b)), d))
    swap_cost = swaps * w.swap_cost
    total = sum(breakdown.values()) + swap_cost
    return CostReport(total, breakdown, counts, swaps, swap_cost, tuple(missing))


def cube_cost_model(hw: HardwareModel, kind: Kind):
    """Per-cube cost: the hardware cost of that cube's gate group.

    Circuit cost is additive over gates, so a cover's circuit cost is the sum
    of its cubes' costs.
    """
    cache: dict[Cube, float] = {}

    def cost(cube: Cube) -> float:
        v = cache.get(cube)
        if v is None:
            v = cache[cube] = circuit_cost(Circuit(cube.n, kind, tuple(cube_gates(cube, kind))), hw).total
        return v

    return cost


@dataclass(frozen=True)
class Selection:
    cover: ParityCover
    circuit: Circuit
    report: CostReport


def select_variant(f: TruthTable, kind: Kind, hw: HardwareModel,
                   candidates: list[ParityCover] | None = None,
                   allow_parity_cubes: bool = True) -> Selection:
    """Cheapest candidate on ``hw``; ties go to the smaller emitted text.

    Without candidates, the minimizer runs with the hardware cost model
    (exact up to four variables, heuristic beyond).
    """
    if not candidates:
        cost = cube_cost_model(hw, kind)
        if f.n <= EXACT_GUARANTEED_ARITY:
            res = search_exact(f, SearchConfig(allow_parity_cubes=allow_parity_cubes, cost=cost))
            candidates = [res.cover]
        else:
            candidates = [minimize_heuristic(f, SearchConfig(mode=Mode.HEURISTIC, cost=cost,
                                                             allow_parity_cubes=allow_parity_cubes))]
        if not candidates:
            raise HardwareError("no candidate covers and the minimizer produced none")
    best = None
    for cov in candidates:
        if not cover_validate(cov, f):
            raise ValueError(f"candidate {cov} does not compute the function")
        circ = cover_to_circuit(cov, kind)
        rep = circuit_cost(circ, hw)
        rank = (rep.total, emit(circ))
        if best is None or rank < best[0]:
            best = (rank, Selection(cov, circ, rep))
    return best[1]


@dataclass
class ParetoList:
    entries: list[tuple[ParityCover, float]]
    partial: bool = False

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def covers(self) -> list[ParityCover]:
        return [c for c, _ in self.entries]


def enumerate_pareto(f: TruthTable, kind: Kind, hw: HardwareModel, budget: float | None = None,
                     max_cubes: int | None = None, allow_parity_cubes: bool = True,
                     node_limit: int = 2_000_000) -> ParetoList:
    """Minimal and near-minimal covers sorted by hardware cost.

    Covers with up to ``max_cubes`` cubes (default: one more than the
    minimum cube count, and at least the size of the cheapest cover) whose
    cost is within ``budget`` of the cheapest are listed. ``partial`` is set
    when the node limit stopped the enumeration.
    """
    if f.n > EXACT_GUARANTEED_ARITY:
        raise ArityError(f"Pareto enumeration supports at most {EXACT_GUARANTEED_ARITY} variables")
    cost = cube_cost_model(hw, kind)
    cheapest = search_exact(f, SearchConfig(allow_parity_cubes=allow_parity_cubes, cost=cost))
    smallest = search_exact(f, SearchConfig(allow_parity_cubes=allow_parity_cubes, cost=unit_cost))
    if max_cubes is None:
        max_cubes = max(len(smallest.cover) + 1, len(cheapest.cover))
    bound = math.inf if budget is None else cheapest.cost + budget
    found, complete = enumerate_covers(f, cost, max_cubes, bound, allow_parity_cubes, node_limit=node_limit)
    seen = {}
    for cov, c in found + [(cheapest.cover, cheapest.cost)]:
        if c <= bound + 1e-9:
            seen.setdefault(cov.key, (cov, c))
    entries = sorted(seen.values(), key=lambda e: (e[1], e[0].key))
    return ParetoList(entries, partial=not complete)
