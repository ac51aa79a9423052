"""Verification oracles.

Two tiers: a classical/sign-tracking simulator for circuits that permute
basis states (everything except Hadamard), run exhaustively through the
kernels, and a dense state-vector simulator for small registers.

Basis index: x1 is the most significant bit; y, when present, the least.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .circuit import CNot, Circuit, CircuitError, Hadamard, Kind, LGate, Not, RGate, Toffoli, Y
from .logic import ArityError, Assignment, TruthTable

MAX_STATEVECTOR_QUBITS = 14
NORM_TOL = 1e-12

FLIP, SIGN, HADAMARD = 0, 1, 2


class NonClassicalGateError(CircuitError):
    pass


class ControlRegisterError(CircuitError):
    """The circuit left the control register changed for some input."""


@dataclass(frozen=True)
class BasisState:
    x: tuple[int, ...]
    y: int | None = None

    @property
    def n(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class SignedBasisState:
    state: BasisState
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")


@dataclass
class StateVector:
    amplitudes: np.ndarray
    n_qubits: int

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError(f"need {1 << self.n_qubits} amplitudes")
        norm = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if abs(norm - 1.0) > NORM_TOL * max(1, self.amplitudes.size):
            raise ValueError(f"state is not normalized (norm^2 = {norm})")

    @classmethod
    def basis(cls, n_qubits: int, index: int) -> StateVector:
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(amps, n_qubits)

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))


def bit_position(c: Circuit, q: int) -> int:
    if c.kind is Kind.FCNOT:
        return 0 if q == Y else c.n - q + 1
    return c.n - q


def compile_ops(c: Circuit, allow_hadamard: bool = False):
    """Lower gates to (kind, target bit, positive mask, negative mask) rows."""
    shift = 1 if c.kind is Kind.FCNOT else 0
    kinds, targets, pos, neg = [], [], [], []

    def bit(q: int) -> int:
        return 1 << bit_position(c, q)

    for g in c.gates:
        if isinstance(g, Not):
            row = (FLIP, bit_position(c, g.target), 0, 0)
        elif isinstance(g, CNot):
            row = (FLIP, bit_position(c, g.target), bit(g.control), 0)
        elif isinstance(g, Toffoli):
            row = (FLIP, bit_position(c, g.target), sum(bit(q) for q in g.controls), 0)
        elif isinstance(g, LGate):
            row = (FLIP, bit_position(c, g.target), g.cube.pos_mask << shift, g.cube.neg_mask << shift)
        elif isinstance(g, RGate):
            row = (SIGN, 0, g.cube.pos_mask << shift, g.cube.neg_mask << shift)
        elif isinstance(g, Hadamard):
            if not allow_hadamard:
                raise NonClassicalGateError("Hadamard gates need the state-vector simulator")
            row = (HADAMARD, bit_position(c, g.target), 0, 0)
        else:
            raise TypeError(f"unknown gate {g!r}")
        kinds.append(row[0])
        targets.append(row[1])
        pos.append(row[2])
        neg.append(row[3])
    return (np.array(kinds, dtype=np.uint8), np.array(targets, dtype=np.uint8),
            np.array(pos, dtype=np.uint64), np.array(neg, dtype=np.uint64))


def simulate_states(c: Circuit, inputs, backend: str | None = None):
    """Push each basis index in ``inputs`` through a Hadamard-free circuit."""
    ops = compile_ops(c)
    return kernels.simulate(*ops, np.asarray(inputs, dtype=np.uint64), backend=backend)


def _state_index(c: Circuit, s: BasisState) -> int:
    if s.n != c.n:
        raise ArityError(f"state has {s.n} control bits, circuit has {c.n}")
    idx = Assignment(c.n, tuple(s.x)).index
    if c.kind is Kind.FCNOT:
        if s.y not in (0, 1):
            raise ValueError("f-C-NOT states need y in {0, 1}")
        idx = (idx << 1) | s.y
    elif s.y is not None:
        raise ValueError("f-C-PS states carry no function register")
    return idx


def _state_from_index(c: Circuit, idx: int) -> BasisState:
    if c.kind is Kind.FCNOT:
        return BasisState(Assignment.from_index(c.n, idx >> 1).bits, idx & 1)
    return BasisState(Assignment.from_index(c.n, idx).bits)


def run_classical(c: Circuit, s: BasisState) -> BasisState:
    if not c.is_classical():
        raise NonClassicalGateError("run_classical accepts NOT/CNOT/TOFFOLI/L gates only")
    out, _ = simulate_states(c, [_state_index(c, s)])
    return _state_from_index(c, int(out[0]))


def run_signed(c: Circuit, s: SignedBasisState) -> SignedBasisState:
    if any(isinstance(g, Hadamard) for g in c.gates):
        raise NonClassicalGateError("Hadamard encountered; use run_statevector")
    out, signs = simulate_states(c, [_state_index(c, s.state)])
    return SignedBasisState(_state_from_index(c, int(out[0])), s.sign * int(signs[0]))


def _apply_hadamard(amps: np.ndarray, bit: int) -> np.ndarray:
    block = amps.reshape(-1, 2, 1 << bit)
    a, b = block[:, 0, :], block[:, 1, :]
    r = 1 / np.sqrt(2)
    return np.stack(((a + b) * r, (a - b) * r), axis=1).reshape(-1)


def run_statevector(c: Circuit, psi: StateVector) -> StateVector:
    """Exact dense simulation; Hadamard = (1/sqrt2)[[1, 1], [1, -1]]."""
    if c.width > MAX_STATEVECTOR_QUBITS:
        raise ValueError(f"state-vector simulation is limited to {MAX_STATEVECTOR_QUBITS} qubits")
    if psi.n_qubits != c.width:
        raise ArityError(f"state has {psi.n_qubits} qubits, circuit acts on {c.width}")
    kinds, targets, pos, neg = compile_ops(c, allow_hadamard=True)
    idx = np.arange(1 << c.width, dtype=np.uint64)
    amps = psi.amplitudes.copy()
    for k, t, p, q in zip(kinds, targets, pos, neg):
        if k == HADAMARD:
            amps = _apply_hadamard(amps, int(t))
            continue
        fire = ((idx & p) == p) & ((idx & q) == 0)
        if k == SIGN:
            amps = np.where(fire, -amps, amps)
        else:
            dest = idx ^ (fire.astype(np.uint64) << np.uint64(t))
            new = np.empty_like(amps)
            new[dest] = amps
            amps = new
    return StateVector(amps, c.width)


def extract_function(c: Circuit, backend: str | None = None) -> TruthTable:
    """Truth table computed by the circuit, by exhaustive simulation.

    f-C-NOT circuits run with y = 0 and read y; f-C-PS circuits run with
    sign +1 and read the sign. Raises :class:`ControlRegisterError` if any
    input leaves the control register changed.
    """
    if any(isinstance(g, Hadamard) for g in c.gates):
        raise NonClassicalGateError("extract_function needs a Hadamard-free circuit")
    xs = np.arange(1 << c.n, dtype=np.uint64)
    if c.kind is Kind.FCNOT:
        out, _ = simulate_states(c, xs << np.uint64(1), backend=backend)
        restored = (out >> np.uint64(1)) == xs
        values = (out & np.uint64(1)).astype(np.uint8)
    else:
        out, signs = simulate_states(c, xs, backend=backend)
        restored = out == xs
        values = (signs == -1).astype(np.uint8)
    if not restored.all():
        bad = int(np.flatnonzero(~restored)[0])
        raise ControlRegisterError(
            f"control register not restored for x={Assignment.from_index(c.n, bad)}")
    return TruthTable(c.n, values.tobytes())


@dataclass(frozen=True)
class Equivalence:
    equal: bool
    witness: Assignment | None = None

    def __bool__(self) -> bool:
        return self.equal


def compare_tables(f: TruthTable, g: TruthTable) -> Equivalence:
    if f.n != g.n:
        raise ArityError(f"arity {f.n} != {g.n}")
    diff = np.flatnonzero(f.array != g.array)
    if len(diff) == 0:
        return Equivalence(True)
    return Equivalence(False, Assignment.from_index(f.n, int(diff[0])))


def equivalent(c1: Circuit, c2: Circuit) -> Equivalence:
    if c1.kind is not c2.kind or c1.n != c2.n:
        raise CircuitError("circuits differ in kind or arity")
    return compare_tables(extract_function(c1), extract_function(c2))


def extract_function_dense(c: Circuit, tol: float = 1e-9) -> TruthTable:
    """Like :func:`extract_function`, for circuits containing Hadamards.

    Each basis input is simulated on the state vector; the output must be
    |x>|f(x)> (f-C-NOT) or (-1)^f(x) |x> (f-C-PS).
    """
    values = bytearray(1 << c.n)
    for x in range(1 << c.n):
        start = (x << 1) if c.kind is Kind.FCNOT else x
        out = run_statevector(c, StateVector.basis(c.width, start)).amplitudes
        if c.kind is Kind.FCNOT:
            hit = [i for i in (start, start | 1) if abs(abs(out[i]) - 1) <= tol and abs(out[i] - 1) <= tol]
            if len(hit) != 1:
                raise ControlRegisterError(
                    f"input x={Assignment.from_index(c.n, x)} does not map to |x>|f(x)>")
            values[x] = hit[0] & 1
        else:
            if abs(abs(out[x]) - 1) > tol or abs(out[x].imag) > tol:
                raise ControlRegisterError(
                    f"input x={Assignment.from_index(c.n, x)} does not map to +-|x>")
            values[x] = 1 if out[x].real < 0 else 0
    return TruthTable(c.n, bytes(values))


def circuit_function(c: Circuit) -> TruthTable:
    """Truth table of any circuit: kernel path when Hadamard-free, dense otherwise."""
    if any(isinstance(g, Hadamard) for g in c.gates):
        return extract_function_dense(c)
    return extract_function(c)
