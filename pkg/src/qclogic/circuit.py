"""Gate-level IR for f-C-NOT and f-C-PS circuits.

Qubits are plain integers: ``Y`` (0) is the function register and ``i`` in
1..n is control qubit ``x<i>``.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .logic import ArityError, Cube, ParityCover, Phase, Polarity

Y = 0


class Kind(enum.Enum):
    FCNOT = "fcnot"
    FCPS = "fcps"


class CircuitError(ValueError):
    pass


class CircuitParseError(CircuitError):
    pass


def qubit_name(q: int) -> str:
    return "y" if q == Y else f"x{q}"


def parse_qubit(name: str) -> int:
    if name == "y":
        return Y
    m = re.fullmatch(r"x([1-9]\d*)", name)
    if not m:
        raise CircuitParseError(f"bad qubit name {name!r}")
    return int(m.group(1))


@dataclass(frozen=True)
class Not:
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)


@dataclass(frozen=True)
class CNot:
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise CircuitError("CNOT control and target must differ")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control, self.target)


@dataclass(frozen=True)
class Toffoli:
    """Generalized Toffoli: all controls positive."""

    controls: tuple[int, ...]
    target: int

    def __post_init__(self):
        if not self.controls:
            raise CircuitError("TOFFOLI needs at least one control")
        if len(set(self.controls)) != len(self.controls) or self.target in self.controls:
            raise CircuitError("TOFFOLI controls and target must be distinct")
        object.__setattr__(self, "controls", tuple(sorted(self.controls)))

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + (self.target,)


@dataclass(frozen=True)
class LGate:
    """Mixed-polarity controlled NOT: flips ``target`` when ``cube`` holds."""

    cube: Cube
    target: int

    def __post_init__(self):
        if self.cube.parity is not None:
            raise CircuitError("L gate cubes carry no parity factor")
        if self.target != Y and self.cube.polarity(self.target) is not Polarity.ABSENT:
            raise CircuitError("L gate cube must not mention its target")

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(self.cube.variables()) + (self.target,)


@dataclass(frozen=True)
class RGate:
    """Phase flip by -1 when ``cube`` holds."""

    cube: Cube

    def __post_init__(self):
        if self.cube.parity is not None:
            raise CircuitError("R gate cubes carry no parity factor")

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(self.cube.variables())


@dataclass(frozen=True)
class Hadamard:
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)


Gate = Union[Not, CNot, Toffoli, LGate, RGate, Hadamard]


def toffoli(controls: Iterable[int], target: int) -> Gate:
    """Generalized Toffoli, normalized: one control is a CNOT, none is a NOT."""
    controls = tuple(sorted(controls))
    if not controls:
        return Not(target)
    if len(controls) == 1:
        return CNot(controls[0], target)
    return Toffoli(controls, target)


@dataclass(frozen=True)
class Circuit:
    n: int
    kind: Kind
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if not isinstance(self.gates, tuple):
            object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            for q in g.qubits:
                if q == Y:
                    if self.kind is Kind.FCPS:
                        raise CircuitError("f-C-PS circuits have no function register")
                elif not 1 <= q <= self.n:
                    raise CircuitError(f"qubit {qubit_name(q)} outside x1..x{self.n}")
            if isinstance(g, RGate) and self.kind is not Kind.FCPS:
                raise CircuitError("R gates only appear in f-C-PS circuits")
            if isinstance(g, (LGate, RGate)) and g.cube.n != self.n:
                raise ArityError(f"gate cube arity {g.cube.n} != circuit arity {self.n}")

    @property
    def width(self) -> int:
        return self.n + (1 if self.kind is Kind.FCNOT else 0)

    def qubits(self) -> list[int]:
        qs = list(range(1, self.n + 1))
        return qs + [Y] if self.kind is Kind.FCNOT else qs

    def __len__(self) -> int:
        return len(self.gates)

    def __add__(self, other: Circuit) -> Circuit:
        if (self.n, self.kind) != (other.n, other.kind):
            raise CircuitError("cannot concatenate circuits of different arity or kind")
        return Circuit(self.n, self.kind, self.gates + other.gates)

    def is_classical(self) -> bool:
        return not any(isinstance(g, (Hadamard, RGate)) for g in self.gates)

    def gate_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for g in self.gates:
            name = _NATIVE_NAMES[type(g)]
            counts[name] = counts.get(name, 0) + 1
        return counts


# construction


def _not_sandwich(cube: Cube, core: Gate) -> list[Gate]:
    nots = [Not(v) for v in cube.variables() if cube.polarity(v) is Polarity.NEGATIVE]
    return nots + [core] + list(nots)


def minterm_gate(c: Cube, target: int = Y) -> list[Gate]:
    """NOT gates on the zero bits, the n-control Toffoli, then the same NOTs again."""
    if not c.is_minterm:
        raise CircuitError(f"{c!r} is not a minterm")
    return _not_sandwich(c, toffoli(c.variables(), target))


def l_gate_decompose(g: LGate) -> list[Gate]:
    return _not_sandwich(g.cube, toffoli(g.cube.variables(), g.target))


def default_pivot(cube: Cube) -> int | None:
    positives = [v for v in cube.variables() if cube.polarity(v) is Polarity.POSITIVE]
    return positives[-1] if positives else None


def rgate_decompose(g: RGate, pivot: int | None = None) -> list[Gate]:
    """H on the pivot, L on the rest of the cube targeting the pivot, H again.

    ``pivot`` must be a positive literal of the cube; by default the
    highest-indexed one.
    """
    if pivot is None:
        pivot = default_pivot(g.cube)
        if pivot is None:
            raise CircuitError(f"R gate {g.cube} has no positive literal to pivot on")
    elif g.cube.polarity(pivot) is not Polarity.POSITIVE:
        raise CircuitError(f"pivot x{pivot} is not a positive literal of {g.cube}")
    inner = LGate(g.cube.with_literal(pivot, Polarity.ABSENT), pivot)
    return [Hadamard(pivot), *l_gate_decompose(inner), Hadamard(pivot)]


def rgate_basic(g: RGate) -> list[Gate]:
    """Basic-gate form of any R gate.

    Cubes with a positive literal use :func:`rgate_decompose`. All-negative
    cubes are conjugated by NOTs onto a positive cube. The empty cube is the
    global phase -1, built exactly as (Z X)^2 on x1 with Z = H X H.
    """
    cube = g.cube
    if default_pivot(cube) is not None:
        return rgate_decompose(g)
    if not cube.variables():
        zx = [Not(1), Hadamard(1), Not(1), Hadamard(1)]
        return zx + zx
    negs = cube.variables()
    flipped = cube
    for v in negs:
        flipped = flipped.with_literal(v, Polarity.POSITIVE)
    nots = [Not(v) for v in negs]
    return nots + rgate_decompose(RGate(flipped)) + nots


def basic_gates(g: Gate) -> list[Gate]:
    """Lower L and R gates to NOT / CNOT / TOFFOLI / H."""
    if isinstance(g, LGate):
        return l_gate_decompose(g)
    if isinstance(g, RGate):
        return rgate_basic(g)
    return [g]


def decompose(c: Circuit) -> Circuit:
    gates = [b for g in c.gates for b in basic_gates(g)]
    return Circuit(c.n, c.kind, tuple(gates))


def cube_gates(cube: Cube, kind: Kind) -> list[Gate]:
    """Gate group for one cover term.

    A parity factor (x_a XOR x_b) becomes CNOT(a -> b) around the inner gate,
    whose cube carries x_b positive (ODD) or negative (EVEN).
    """
    def core(c: Cube) -> Gate:
        return LGate(c, Y) if kind is Kind.FCNOT else RGate(c)

    if cube.parity is None:
        return [core(cube)]
    p = cube.parity
    pol = Polarity.POSITIVE if p.phase is Phase.ODD else Polarity.NEGATIVE
    inner = cube.without_parity().with_literal(p.var_b, pol)
    sandwich = CNot(p.var_a, p.var_b)
    return [sandwich, core(inner), sandwich]


def cover_to_circuit(cov: ParityCover, kind: Kind) -> Circuit:
    gates = [g for cube in cov.ordered() for g in cube_gates(cube, kind)]
    return Circuit(cov.n, kind, tuple(gates))


def cover_to_fcnot(cov: ParityCover) -> Circuit:
    return cover_to_circuit(cov, Kind.FCNOT)


def cover_to_fcps(cov: ParityCover) -> Circuit:
    return cover_to_circuit(cov, Kind.FCPS)


# text formats

_NATIVE_NAMES = {Not: "NOT", CNot: "CNOT", Toffoli: "TOF", LGate: "L", RGate: "R", Hadamard: "H"}


def _cube_literals(cube: Cube) -> list[str]:
    return [("+" if cube.polarity(v) is Polarity.POSITIVE else "-") + f"x{v}" for v in cube.variables()]


def gate_text(g: Gate) -> str:
    """One gate in the native text format."""
    if isinstance(g, Not):
        return f"NOT {qubit_name(g.target)}"
    if isinstance(g, CNot):
        return f"CNOT {qubit_name(g.control)} {qubit_name(g.target)}"
    if isinstance(g, Toffoli):
        return "TOF " + " ".join(map(qubit_name, g.controls)) + f" ; {qubit_name(g.target)}"
    if isinstance(g, LGate):
        return " ".join(["L", *_cube_literals(g.cube), ";", qubit_name(g.target)])
    if isinstance(g, RGate):
        return " ".join(["R", *_cube_literals(g.cube)])
    if isinstance(g, Hadamard):
        return f"H {qubit_name(g.target)}"
    raise TypeError(f"unknown gate {g!r}")


def _qasm_ref(q: int) -> str:
    return "y[0]" if q == Y else f"x[{q - 1}]"


def _qasm_line(g: Gate) -> str:
    if isinstance(g, Not):
        return f"x {_qasm_ref(g.target)};"
    if isinstance(g, Hadamard):
        return f"h {_qasm_ref(g.target)};"
    if isinstance(g, CNot):
        return f"cx {_qasm_ref(g.control)}, {_qasm_ref(g.target)};"
    if isinstance(g, Toffoli):
        refs = ", ".join(_qasm_ref(q) for q in g.qubits)
        if len(g.controls) == 2:
            return f"ccx {refs};"
        return f"ctrl({len(g.controls)}) @ x {refs};"
    raise TypeError(f"gate {g!r} must be lowered before QASM emission")


def emit(c: Circuit, fmt: str = "native") -> str:
    if fmt == "native":
        lines = [f"circuit {c.kind.value} vars {c.n}"]
        lines += [gate_text(g) for g in c.gates]
    elif fmt == "qasm":
        lines = ["OPENQASM 3.0;", 'include "stdgates.inc";', f"qubit[{c.n}] x;"]
        if c.kind is Kind.FCNOT:
            lines.append("qubit[1] y;")
        lines += [_qasm_line(g) for g in decompose(c).gates]
    else:
        raise ValueError(f"unknown emission format {fmt!r}")
    return "\n".join(lines) + "\n"


def _parse_literals(n: int, tokens: Sequence[str], lineno: int) -> Cube:
    lits = [Polarity.ABSENT] * n
    for tok in tokens:
        if len(tok) < 2 or tok[0] not in "+-":
            raise CircuitParseError(f"line {lineno}: literal {tok!r} needs a +/- prefix")
        q = parse_qubit(tok[1:])
        if q == Y or q > n:
            raise CircuitParseError(f"line {lineno}: literal {tok!r} outside x1..x{n}")
        if lits[q - 1] is not Polarity.ABSENT:
            raise CircuitParseError(f"line {lineno}: variable {tok[1:]} repeated")
        lits[q - 1] = Polarity.POSITIVE if tok[0] == "+" else Polarity.NEGATIVE
    return Cube(n, tuple(lits))


def parse_circuit(text: str) -> Circuit:
    """Parse the native circuit format produced by :func:`emit`."""
    header = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            m = re.fullmatch(r"circuit\s+(fcnot|fcps)\s+vars\s+(\d+)", line)
            if not m:
                raise CircuitParseError(f"line {lineno}: expected 'circuit fcnot|fcps vars <n>'")
            header = (Kind(m.group(1)), int(m.group(2)))
            if header[1] < 1:
                raise CircuitParseError(f"line {lineno}: arity must be positive")
            continue
        kind, n = header
        op, *rest = line.split()
        try:
            if op == "NOT" and len(rest) == 1:
                gates.append(Not(parse_qubit(rest[0])))
            elif op == "H" and len(rest) == 1:
                gates.append(Hadamard(parse_qubit(rest[0])))
            elif op == "CNOT" and len(rest) == 2:
                gates.append(CNot(parse_qubit(rest[0]), parse_qubit(rest[1])))
            elif op == "TOF" and ";" in rest and rest.index(";") == len(rest) - 2:
                gates.append(Toffoli(tuple(parse_qubit(t) for t in rest[:-2]), parse_qubit(rest[-1])))
            elif op == "L" and ";" in rest and rest.index(";") == len(rest) - 2:
                gates.append(LGate(_parse_literals(n, rest[:-2], lineno), parse_qubit(rest[-1])))
            elif op == "R":
                gates.append(RGate(_parse_literals(n, rest, lineno)))
            else:
                raise CircuitParseError(f"line {lineno}: cannot parse {line!r}")
        except CircuitParseError:
            raise
        except (CircuitError, ValueError) as exc:
            raise CircuitParseError(f"line {lineno}: {exc}") from exc
    if header is None:
        raise CircuitParseError("missing circuit header")
    try:
        return Circuit(header[1], header[0], tuple(gates))
    except ValueError as exc:
        raise CircuitParseError(str(exc)) from exc
