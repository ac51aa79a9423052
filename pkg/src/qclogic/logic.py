"""Boolean-function domain model.

Truth tables, assignments, cubes (mixed-polarity product terms, optionally
carrying one two-variable parity factor), parity covers and Karnaugh-map
geometry.

Index convention used throughout the package: an assignment (x1, ..., xn)
maps to the integer whose big-endian bits are x1...xn, so x1 is the most
significant bit and variable ``i`` lives at bit position ``n - i``.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_ARITY = 20


class ArityError(ValueError):
    """Raised when objects of different arity are combined."""


class TruthTableParseError(ValueError):
    pass


class Polarity(enum.Enum):
    POSITIVE = "1"
    NEGATIVE = "0"
    ABSENT = "-"


class Phase(enum.Enum):
    EVEN = "="
    ODD = "^"


def _check_arity(n: int, limit: int = MAX_ARITY) -> None:
    if not isinstance(n, int) or n < 1 or n > limit:
        raise ArityError(f"arity must be in 1..{limit}, got {n!r}")


def _bit(n: int, var: int) -> int:
    """Bit position of variable ``var`` (1-based) in an n-bit index."""
    return n - var


@dataclass(frozen=True)
class Assignment:
    n: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != self.n:
            raise ArityError(f"assignment has {len(self.bits)} bits, expected {self.n}")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"assignment bits must be 0/1: {self.bits}")

    @classmethod
    def from_index(cls, n: int, index: int) -> Assignment:
        return cls(n, tuple((index >> (n - 1 - k)) & 1 for k in range(n)))

    @classmethod
    def from_string(cls, s: str) -> Assignment:
        return cls(len(s), tuple(int(ch) for ch in s))

    @property
    def index(self) -> int:
        value = 0
        for b in self.bits:
            value = (value << 1) | b
        return value

    def __getitem__(self, var: int) -> int:
        """Value of variable ``var`` (1-based)."""
        return self.bits[var - 1]

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class TruthTable:
    """A total Boolean function of ``n`` inputs.

    ``values[i]`` is f at the assignment with index ``i``.
    """

    n: int
    values: bytes

    def __post_init__(self):
        _check_arity(self.n)
        if not isinstance(self.values, bytes):
            object.__setattr__(self, "values", bytes(self.values))
        if len(self.values) != 1 << self.n:
            raise ValueError(f"truth table needs {1 << self.n} values, got {len(self.values)}")
        if self.values.translate(None, b"\x00\x01"):
            raise ValueError("truth table values must be 0 or 1")

    @classmethod
    def from_function(cls, n: int, fn) -> TruthTable:
        return cls(n, bytes(int(bool(fn(Assignment.from_index(n, i)))) for i in range(1 << n)))

    @classmethod
    def from_mask(cls, n: int, mask: int) -> TruthTable:
        """Build from an integer whose bit ``i`` is f at index ``i``."""
        _check_arity(n)
        return cls(n, bytes((mask >> i) & 1 for i in range(1 << n)))

    @classmethod
    def from_hex(cls, n: int, text: str) -> TruthTable:
        """Big-endian hex: the first (most significant) bit of the string is f at index 0."""
        _check_arity(n)
        size = 1 << n
        digits = (size + 3) // 4
        text = text.strip().lower()
        if text.startswith("0x"):
            text = text[2:]
        if len(text) != digits or not re.fullmatch(r"[0-9a-f]+", text):
            raise TruthTableParseError(f"hex string for vars {n} must have exactly {digits} hex digits")
        bits = bin(int(text, 16))[2:].zfill(4 * digits)
        if "1" in bits[size:]:
            raise TruthTableParseError("hex padding bits beyond 2^n must be zero")
        return cls(n, bytes(int(b) for b in bits[:size]))

    @classmethod
    def constant(cls, n: int, value: int) -> TruthTable:
        _check_arity(n)
        return cls(n, bytes([value & 1]) * (1 << n))

    def __call__(self, x) -> int:
        if isinstance(x, Assignment):
            if x.n != self.n:
                raise ArityError(f"assignment arity {x.n} != table arity {self.n}")
            return self.values[x.index]
        if isinstance(x, str):
            return self(Assignment.from_string(x))
        if isinstance(x, (tuple, list)):
            return self(Assignment(self.n, tuple(x)))
        return self.values[x]

    @cached_property
    def array(self) -> np.ndarray:
        return np.frombuffer(self.values, dtype=np.uint8)

    @cached_property
    def mask(self) -> int:
        packed = np.packbits(self.array, bitorder="little")
        return int.from_bytes(packed.tobytes(), "little")

    def ones(self) -> list[int]:
        return [i for i, v in enumerate(self.values) if v]

    def hex(self) -> str:
        size = 1 << self.n
        digits = (size + 3) // 4
        bits = "".join("1" if v else "0" for v in self.values).ljust(4 * digits, "0")
        return format(int(bits, 2), f"0{digits}x")

    def __str__(self) -> str:
        return f"TruthTable(vars={self.n}, hex={self.hex()})"


@dataclass(frozen=True)
class ParityFactor:
    """The factor (x_a XOR x_b) for ODD phase, or its negation for EVEN."""

    var_a: int
    var_b: int
    phase: Phase

    def __post_init__(self):
        if self.var_a == self.var_b:
            raise ValueError("parity factor needs two distinct variables")
        if self.var_a > self.var_b:
            a, b = self.var_b, self.var_a
            object.__setattr__(self, "var_a", a)
            object.__setattr__(self, "var_b", b)

    def holds(self, xa: int, xb: int) -> bool:
        return (xa ^ xb) == (1 if self.phase is Phase.ODD else 0)


@dataclass(frozen=True)
class Cube:
    """A product term over ``n`` variables.

    ``literals[i - 1]`` is the polarity of variable ``i``. A parity factor,
    when present, replaces the literals of its two variables (both must be
    ABSENT).
    """

    n: int
    literals: tuple[Polarity, ...]
    parity: ParityFactor | None = None

    def __post_init__(self):
        if len(self.literals) != self.n:
            raise ArityError(f"cube has {len(self.literals)} literals, expected {self.n}")
        if self.parity is not None:
            p = self.parity
            if not (1 <= p.var_a <= self.n and 1 <= p.var_b <= self.n):
                raise ValueError(f"parity variables out of range for arity {self.n}")
            if (self.literals[p.var_a - 1] is not Polarity.ABSENT
                    or self.literals[p.var_b - 1] is not Polarity.ABSENT):
                raise ValueError("parity-factor variables must have ABSENT literals")

    # construction helpers

    @classmethod
    def minterm(cls, n: int, index: int) -> Cube:
        a = Assignment.from_index(n, index)
        return cls(n, tuple(Polarity.POSITIVE if b else Polarity.NEGATIVE for b in a.bits))

    @classmethod
    def from_pla(cls, text: str) -> Cube:
        """Parse ``'1-0'`` style notation; ``^``/``=`` mark an ODD/EVEN parity pair."""
        lits, par_vars, par_phase = [], [], None
        for i, ch in enumerate(text, start=1):
            if ch in "^=":
                par_vars.append(i)
                phase = Phase(ch)
                if par_phase is not None and phase is not par_phase:
                    raise ValueError(f"mixed parity markers in {text!r}")
                par_phase = phase
                lits.append(Polarity.ABSENT)
            else:
                lits.append(Polarity(ch))
        parity = None
        if par_vars:
            if len(par_vars) != 2:
                raise ValueError(f"parity factor needs exactly two variables in {text!r}")
            parity = ParityFactor(par_vars[0], par_vars[1], par_phase)
        return cls(len(text), tuple(lits), parity)

    @classmethod
    def from_masks(cls, n: int, pos: int, neg: int) -> Cube:
        lits = []
        for var in range(1, n + 1):
            b = 1 << _bit(n, var)
            lits.append(Polarity.POSITIVE if pos & b else Polarity.NEGATIVE if neg & b else Polarity.ABSENT)
        return cls(n, tuple(lits))

    @classmethod
    def universe(cls, n: int) -> Cube:
        return cls(n, (Polarity.ABSENT,) * n)

    def with_literal(self, var: int, polarity: Polarity) -> Cube:
        lits = list(self.literals)
        lits[var - 1] = polarity
        return Cube(self.n, tuple(lits), self.parity)

    def without_parity(self) -> Cube:
        return Cube(self.n, self.literals)

    # structure

    @property
    def is_minterm(self) -> bool:
        return self.parity is None and Polarity.ABSENT not in self.literals

    def variables(self) -> list[int]:
        """Variables carrying a literal (parity variables excluded)."""
        return [i for i, p in enumerate(self.literals, start=1) if p is not Polarity.ABSENT]

    def polarity(self, var: int) -> Polarity:
        return self.literals[var - 1]

    @property
    def n_present(self) -> int:
        return len(self.variables()) + (2 if self.parity else 0)

    @cached_property
    def pos_mask(self) -> int:
        return sum(1 << _bit(self.n, v) for v, p in enumerate(self.literals, 1) if p is Polarity.POSITIVE)

    @cached_property
    def neg_mask(self) -> int:
        return sum(1 << _bit(self.n, v) for v, p in enumerate(self.literals, 1) if p is Polarity.NEGATIVE)

    def pla(self) -> str:
        chars = [p.value for p in self.literals]
        if self.parity:
            chars[self.parity.var_a - 1] = self.parity.phase.value
            chars[self.parity.var_b - 1] = self.parity.phase.value
        return "".join(chars)

    @cached_property
    def key(self) -> tuple[int, str]:
        """Canonical order: fewest present variables first, then the PLA string."""
        return (self.n_present, self.pla())

    def __lt__(self, other: Cube) -> bool:
        return self.key < other.key

    # evaluation

    def matches_index(self, index: int) -> bool:
        if (index & self.pos_mask) != self.pos_mask or index & self.neg_mask:
            return False
        if self.parity is not None:
            p = self.parity
            xa = (index >> _bit(self.n, p.var_a)) & 1
            xb = (index >> _bit(self.n, p.var_b)) & 1
            return p.holds(xa, xb)
        return True

    def truth_vector(self) -> np.ndarray:
        """Boolean array over all 2^n indices."""
        idx = np.arange(1 << self.n, dtype=np.int64)
        hit = ((idx & self.pos_mask) == self.pos_mask) & ((idx & self.neg_mask) == 0)
        if self.parity is not None:
            p = self.parity
            x = ((idx >> _bit(self.n, p.var_a)) ^ (idx >> _bit(self.n, p.var_b))) & 1
            hit &= x == (1 if p.phase is Phase.ODD else 0)
        return hit

    @cached_property
    def table_mask(self) -> int:
        """Integer whose bit ``i`` is set iff the cube matches index ``i``."""
        packed = np.packbits(self.truth_vector().astype(np.uint8), bitorder="little")
        return int.from_bytes(packed.tobytes(), "little")

    def __str__(self) -> str:
        parts = []
        if self.parity:
            p = self.parity
            term = f"(x{p.var_a}^x{p.var_b})"
            parts.append(term if p.phase is Phase.ODD else "~" + term)
        for v, pol in enumerate(self.literals, 1):
            if pol is Polarity.POSITIVE:
                parts.append(f"x{v}")
            elif pol is Polarity.NEGATIVE:
                parts.append(f"~x{v}")
        return " ".join(parts) if parts else "1"

    def __repr__(self) -> str:
        return f"Cube({self.pla()!r})"


def cube_matches(c: Cube, x: Assignment) -> int:
    if c.n != x.n:
        raise ArityError(f"cube arity {c.n} != assignment arity {x.n}")
    return int(c.matches_index(x.index))


@dataclass(frozen=True)
class ParityCover:
    """A set of cubes whose XOR is meant to equal some function."""

    n: int
    cubes: frozenset[Cube] = frozenset()

    def __post_init__(self):
        if not isinstance(self.cubes, frozenset):
            cubes = list(self.cubes)
            if len(set(cubes)) != len(cubes):
                raise ValueError("duplicate cubes in cover; use ParityCover.xor_of to cancel pairs")
            object.__setattr__(self, "cubes", frozenset(cubes))
        for c in self.cubes:
            if c.n != self.n:
                raise ArityError(f"cube {c!r} has arity {c.n}, cover has {self.n}")

    @classmethod
    def xor_of(cls, n: int, cubes: Iterable[Cube]) -> ParityCover:
        """Product of gates: identical cubes cancel in pairs."""
        acc: set[Cube] = set()
        for c in cubes:
            acc ^= {c}
        return cls(n, frozenset(acc))

    @classmethod
    def parse(cls, n: int, *pla: str) -> ParityCover:
        return cls(n, frozenset(Cube.from_pla(p) for p in pla))

    def ordered(self) -> list[Cube]:
        return sorted(self.cubes, key=lambda c: c.key)

    @property
    def key(self) -> tuple:
        return tuple(c.key for c in self.ordered())

    def __len__(self) -> int:
        return len(self.cubes)

    def __iter__(self) -> Iterator[Cube]:
        return iter(self.ordered())

    def truth_vector(self) -> np.ndarray:
        acc = np.zeros(1 << self.n, dtype=bool)
        for c in self.cubes:
            acc ^= c.truth_vector()
        return acc

    def to_truth_table(self) -> TruthTable:
        return TruthTable(self.n, self.truth_vector().astype(np.uint8).tobytes())

    def __str__(self) -> str:
        return "{" + ", ".join(str(c) for c in self.ordered()) + "}"


def minterms_of(f: TruthTable) -> list[Cube]:
    return [Cube.minterm(f.n, i) for i in f.ones()]


def minterm_cover(f: TruthTable) -> ParityCover:
    return ParityCover(f.n, frozenset(minterms_of(f)))


def cover_evaluate(cov: ParityCover, x: Assignment) -> int:
    if cov.n != x.n:
        raise ArityError(f"cover arity {cov.n} != assignment arity {x.n}")
    idx = x.index
    return sum(c.matches_index(idx) for c in cov.cubes) & 1


@dataclass(frozen=True)
class ValidityReport:
    ok: bool
    mismatches: tuple[Assignment, ...] = ()

    @property
    def status(self) -> str:
        return "PASS" if self.ok else "FAIL"

    def __bool__(self) -> bool:
        return self.ok


def cover_validate(cov: ParityCover, f: TruthTable) -> ValidityReport:
    if cov.n != f.n:
        raise ArityError(f"cover arity {cov.n} != table arity {f.n}")
    bad = np.flatnonzero(cov.truth_vector() != f.array.astype(bool))
    return ValidityReport(len(bad) == 0, tuple(Assignment.from_index(f.n, int(i)) for i in bad))


# Karnaugh-map geometry


def gray_code(bits: int) -> list[tuple[int, ...]]:
    if bits == 0:
        return [()]
    return [tuple((g >> (bits - 1 - k)) & 1 for k in range(bits))
            for g in (i ^ (i >> 1) for i in range(1 << bits))]


@dataclass(frozen=True)
class KMapLayout:
    n: int
    row_vars: tuple[int, ...]
    col_vars: tuple[int, ...]

    def __post_init__(self):
        if not 3 <= self.n <= 4:
            raise ArityError(f"K-map rendering supports 3 or 4 variables, got {self.n}")
        if sorted(self.row_vars + self.col_vars) != list(range(1, self.n + 1)):
            raise ValueError("row and column variables must partition x1..xn")

    @classmethod
    def default(cls, n: int) -> KMapLayout:
        if not 3 <= n <= 4:
            raise ArityError(f"K-map rendering supports 3 or 4 variables, got {n}")
        split = n // 2
        return cls(n, tuple(range(1, split + 1)), tuple(range(split + 1, n + 1)))

    @property
    def row_labels(self) -> list[tuple[int, ...]]:
        return gray_code(len(self.row_vars))

    @property
    def col_labels(self) -> list[tuple[int, ...]]:
        return gray_code(len(self.col_vars))


def kmap_cells(layout: KMapLayout) -> list[list[Assignment]]:
    grid = []
    for rlab in layout.row_labels:
        row = []
        for clab in layout.col_labels:
            bits = [0] * layout.n
            for var, b in zip(layout.row_vars, rlab):
                bits[var - 1] = b
            for var, b in zip(layout.col_vars, clab):
                bits[var - 1] = b
            row.append(Assignment(layout.n, tuple(bits)))
        grid.append(row)
    return grid


# text format


def parse_truth_table(text: str) -> TruthTable:
    """Parse the ``vars <n>`` truth-table text format (rows or ``hex``)."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append((lineno, line))
    if not lines:
        raise TruthTableParseError("empty truth table")
    lineno, head = lines[0]
    m = re.fullmatch(r"vars\s+(\d+)", head)
    if not m:
        raise TruthTableParseError(f"line {lineno}: expected 'vars <n>', got {head!r}")
    n = int(m.group(1))
    if not 1 <= n <= MAX_ARITY:
        raise TruthTableParseError(f"line {lineno}: arity must be in 1..{MAX_ARITY}")
    body = lines[1:]
    if len(body) == 1 and body[0][1].startswith("hex"):
        lineno, line = body[0]
        parts = line.split()
        if len(parts) != 2:
            raise TruthTableParseError(f"line {lineno}: expected 'hex <string>'")
        return TruthTable.from_hex(n, parts[1])

    size = 1 << n
    values: list[int | None] = [None] * size
    for lineno, line in body:
        parts = line.split()
        if len(parts) != 2:
            raise TruthTableParseError(f"line {lineno}: expected '<bits> <value>', got {line!r}")
        bits, val = parts
        if len(bits) != n or set(bits) - {"0", "1"}:
            raise TruthTableParseError(f"line {lineno}: input {bits!r} is not {n} binary digits")
        if val not in ("0", "1"):
            raise TruthTableParseError(f"line {lineno}: output {val!r} must be 0 or 1 (don't-cares are not supported)")
        idx = int(bits, 2)
        if values[idx] is not None:
            raise TruthTableParseError(f"line {lineno}: duplicate row {bits}")
        values[idx] = int(val)
    missing = [i for i, v in enumerate(values) if v is None]
    if missing:
        raise TruthTableParseError(f"missing {len(missing)} rows, first {format(missing[0], f'0{n}b')}")
    return TruthTable(n, bytes(values))


def format_truth_table(f: TruthTable, rows: bool = False) -> str:
    out = [f"vars {f.n}"]
    if rows:
        out += [f"{format(i, f'0{f.n}b')} {v}" for i, v in enumerate(f.values)]
    else:
        out.append(f"hex {f.hex()}")
    return "\n".join(out) + "\n"


def all_cubes(n: int, parity: bool = False) -> list[Cube]:
    """Every parity-free cube (3^n), plus parity cubes when requested, in canonical order."""
    cubes = []
    choices = (Polarity.ABSENT, Polarity.NEGATIVE, Polarity.POSITIVE)

    def rec(prefix: list[Polarity]):
        if len(prefix) == n:
            cubes.append(Cube(n, tuple(prefix)))
            return
        for p in choices:
            rec(prefix + [p])

    rec([])
    if parity:
        for a in range(1, n + 1):
            for b in range(a + 1, n + 1):
                for phase in Phase:
                    for base in _cubes_without(n, (a, b)):
                        cubes.append(Cube(n, base, ParityFactor(a, b, phase)))
    cubes.sort(key=lambda c: c.key)
    return cubes


def _cubes_without(n: int, skip: Sequence[int]) -> Iterator[tuple[Polarity, ...]]:
    free = [v for v in range(1, n + 1) if v not in skip]
    choices = (Polarity.ABSENT, Polarity.NEGATIVE, Polarity.POSITIVE)

    def rec(k: int, lits: list[Polarity]):
        if k == len(free):
            yield tuple(lits)
            return
        for p in choices:
            lits[free[k] - 1] = p
            yield from rec(k + 1, lits)
        lits[free[k] - 1] = Polarity.ABSENT

    yield from rec(0, [Polarity.ABSENT] * n)
