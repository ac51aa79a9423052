"""Command-line front end: synth, verify, cost, kmap, explain.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
Artifacts go to stdout (or ``--out``), diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .circuit import (
    Circuit,
    CircuitError,
    Kind,
    cover_to_circuit,
    decompose,
    emit,
    gate_text,
    parse_circuit,
)
from .hardware import HardwareError, HardwareModel, circuit_cost, parse_hardware, select_variant
from .logic import (
    ArityError,
    KMapLayout,
    ParityCover,
    TruthTable,
    TruthTableParseError,
    kmap_cells,
    minterm_cover,
    parse_truth_table,
)
from .minimizer import (
    EXACT_GUARANTEED_ARITY,
    EXACT_MAX_ARITY,
    Mode,
    SearchConfig,
    explain,
    minimize_heuristic,
    search_exact,
)
from .simulator import ControlRegisterError, circuit_function, compare_tables

OK, MISMATCH, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _diag(msg: str) -> None:
    print(msg, file=sys.stderr)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _load_table(path: str) -> TruthTable:
    try:
        return parse_truth_table(_read(path))
    except (TruthTableParseError, ArityError) as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _load_circuit(path: str) -> Circuit:
    try:
        return parse_circuit(_read(path))
    except CircuitError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _load_hardware(path: str) -> HardwareModel:
    try:
        return parse_hardware(_read(path))
    except HardwareError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _gate_summary(c: Circuit) -> str:
    counts = decompose(c).gate_counts()
    if not counts:
        return "none"
    return " ".join(f"{k}={counts[k]}" for k in sorted(counts))


def _synthesize(f: TruthTable, kind: Kind, method: str, hw: HardwareModel | None,
                parity: bool) -> ParityCover:
    if method == "naive":
        cover = minterm_cover(f)
    elif method == "exact":
        if f.n > EXACT_MAX_ARITY:
            raise UsageError(f"--exact supports at most {EXACT_MAX_ARITY} variables")
        res = search_exact(f, SearchConfig(allow_parity_cubes=parity))
        if not res.optimal:
            _diag(f"warning: exact search stopped after {res.nodes} nodes; cover may be suboptimal")
        cover = res.cover
    else:
        cover = minimize_heuristic(f, SearchConfig(mode=Mode.HEURISTIC, allow_parity_cubes=parity))
    if hw is None:
        return cover
    candidates = [cover]
    if method == "exact" and f.n <= EXACT_GUARANTEED_ARITY:
        # the hardware-weighted optimum may differ from the cube-count optimum
        candidates.append(select_variant(f, kind, hw, allow_parity_cubes=parity).cover)
    return select_variant(f, kind, hw, candidates).cover


def cmd_synth(args) -> int:
    f = _load_table(args.input)
    kind = Kind(args.target)
    hw = _load_hardware(args.hardware) if args.hardware else None
    method = args.method or ("exact" if f.n <= EXACT_GUARANTEED_ARITY else "heuristic")
    cover = _synthesize(f, kind, method, hw, not args.no_parity)
    circ = cover_to_circuit(cover, kind)
    try:
        got = circuit_function(circ)
    except ControlRegisterError as exc:
        _diag(f"internal error: synthesized circuit failed verification ({exc}); nothing written")
        return MISMATCH
    check = compare_tables(f, got)
    if not check:
        _diag(f"internal error: synthesized circuit differs at x={check.witness}; nothing written")
        return MISMATCH
    _write(emit(circ, args.emit), args.out)
    model = hw or HardwareModel.complete(f.n, with_y=kind is Kind.FCNOT)
    try:
        rep = circuit_cost(circ, model)
        cost = f"cost: total {_fmt_num(rep.total)} swaps {rep.swap_count}"
    except HardwareError as exc:
        cost = f"cost: unavailable ({exc})"
    _diag(f"method: {method}")
    _diag(f"cover: {cover}")
    _diag(f"gates: {len(circ.gates)} native; basic {_gate_summary(circ)}")
    _diag(cost)
    _diag("verified: yes")
    return OK


def _fmt_num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def cmd_verify(args) -> int:
    c = _load_circuit(args.circuit)
    f = _load_table(args.input)
    if c.n != f.n:
        raise UsageError(f"circuit has {c.n} variables, table has {f.n}")
    try:
        got = circuit_function(c)
    except ControlRegisterError as exc:
        print("NOT EQUIVALENT")
        _diag(str(exc))
        return MISMATCH
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    res = compare_tables(f, got)
    if res:
        print("EQUIVALENT")
        return OK
    print("NOT EQUIVALENT")
    print(f"witness x={res.witness}")
    return MISMATCH


def cmd_cost(args) -> int:
    c = _load_circuit(args.circuit)
    hw = _load_hardware(args.hardware)
    try:
        rep = circuit_cost(c, hw)
    except HardwareError as exc:
        raise UsageError(str(exc)) from exc
    sys.stdout.write(rep.format())
    return OK


def _letters(k: int) -> list[str]:
    out = []
    for i in range(k):
        s, j = "", i
        while True:
            s = chr(ord("A") + j % 26) + s
            j = j // 26 - 1
            if j < 0:
                break
        out.append(s)
    return out


def render_kmap(f: TruthTable, cover: ParityCover | None = None) -> str:
    layout = KMapLayout.default(f.n)
    grid = kmap_cells(layout)
    groups = list(cover.ordered()) if cover is not None else []
    names = _letters(len(groups))

    def cell(a) -> str:
        tag = "".join(nm for nm, g in zip(names, groups) if g.matches_index(a.index))
        return f"{f(a)}{':' + tag if tag else ''}"

    texts = [[cell(a) for a in row] for row in grid]
    width = max(4, max(len(t) for row in texts for t in row) + 1)
    rlab = "".join(f"x{v}" for v in layout.row_vars)
    clab = "".join(f"x{v}" for v in layout.col_vars)
    pad = len(rlab) + 2
    lines = [" " * pad + clab,
             rlab.ljust(pad) + "".join("".join(map(str, b)).rjust(width) for b in layout.col_labels)]
    for bits, row in zip(layout.row_labels, texts):
        lines.append(("".join(map(str, bits))).rjust(len(rlab)).ljust(pad)
                     + "".join(t.rjust(width) for t in row))
    if cover is None:
        return "\n".join(lines) + "\n"
    lines.append("")
    if not groups:
        lines.append("groups: none")
    else:
        lines.append("groups:")
        lines += [f"  {nm} = {g}" for nm, g in zip(names, groups)]
    bad, shared = [], []
    for row in grid:
        for a in row:
            hits = [nm for nm, g in zip(names, groups) if g.matches_index(a.index)]
            v = f(a)
            if len(hits) % 2 != v:
                bad.append(str(a))
            if len(hits) >= 2:
                shared.append(f"  {a}: {v}-cell in {len(hits)} groups ({', '.join(hits)})")
    if bad:
        lines.append(f"parity rule: VIOLATED at {', '.join(bad)}")
    else:
        lines.append("parity rule: OK (1-cells odd, 0-cells even)")
    if shared:
        lines.append("shared cells:")
        lines += shared
    return "\n".join(lines) + "\n"


def cmd_kmap(args) -> int:
    f = _load_table(args.input)
    if not 3 <= f.n <= 4:
        raise UsageError(f"kmap supports 3 or 4 variables, got {f.n}")
    cover = search_exact(f, SearchConfig(allow_parity_cubes=False)).cover if args.cover else None
    sys.stdout.write(render_kmap(f, cover))
    return OK


def cmd_explain(args) -> int:
    f = _load_table(args.input)
    if f.n > EXACT_GUARANTEED_ARITY:
        raise UsageError(f"explain supports at most {EXACT_GUARANTEED_ARITY} variables")
    kind = Kind(args.target)
    naive = minterm_cover(f)
    if not naive.cubes:
        print("empty circuit; nothing to explain")
        return OK
    best = search_exact(f, SearchConfig()).cover
    final = cover_to_circuit(best, kind)
    if not compare_tables(f, circuit_function(final)):
        _diag("internal error: minimized circuit failed verification")
        return MISMATCH
    out = ["naive circuit:", emit(cover_to_circuit(naive, kind)).rstrip(), "", "rewrite trace:"]
    steps = explain(naive, best)
    if not steps:
        out.append("  (none; the minterm circuit is already minimal)")
    for i, s in enumerate(steps, start=1):
        out.append(f"  {i}. {s.rule.value}: {s.note}")
    out += ["", "final circuit:", emit(final).rstrip(), "", "basic gates:"]
    out += [f"  {gate_text(g)}" for g in decompose(final).gates]
    print("\n".join(out))
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qclogic", description="Quantum combinational logic synthesis.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="synthesize a circuit from a truth table")
    s.add_argument("--input", required=True)
    s.add_argument("--target", required=True, choices=["fcnot", "fcps"])
    m = s.add_mutually_exclusive_group()
    for name in ("naive", "exact", "heuristic"):
        m.add_argument(f"--{name}", dest="method", action="store_const", const=name)
    s.add_argument("--no-parity", action="store_true", help="disable parity cubes")
    s.add_argument("--hardware")
    s.add_argument("--emit", choices=["native", "qasm"], default="native")
    s.add_argument("--out")
    s.set_defaults(func=cmd_synth)

    v = sub.add_parser("verify", help="check a circuit against a truth table")
    v.add_argument("--circuit", required=True)
    v.add_argument("--input", required=True)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("cost", help="cost a circuit on a hardware model")
    c.add_argument("--circuit", required=True)
    c.add_argument("--hardware", required=True)
    c.set_defaults(func=cmd_cost)

    k = sub.add_parser("kmap", help="render an ASCII Karnaugh map")
    k.add_argument("--input", required=True)
    k.add_argument("--cover", action="store_true", help="overlay the exact minimal cover")
    k.set_defaults(func=cmd_kmap)

    e = sub.add_parser("explain", help="show the rewrite trace from minterms to the minimum")
    e.add_argument("--input", required=True)
    e.add_argument("--target", required=True, choices=["fcnot", "fcps"])
    e.set_defaults(func=cmd_explain)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except UsageError as exc:
        _diag(f"error: {exc}")
        return USAGE


def main() -> None:
    sys.exit(run())
