import random
import subprocess
import sys

import pytest

from qclogic.cli import render_kmap, run
from qclogic.logic import ParityCover, TruthTable, format_truth_table

PATH_HW = "qubit x1\nqubit x2\nqubit x3\nedge x1 x2\nedge x2 x3\n"


@pytest.fixture
def files(tmp_path, f_b):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    write.fb = write("fb.tt", format_truth_table(f_b, rows=True))
    write.path = write("path.hw", PATH_HW)
    write.dir = tmp_path
    return write


def test_synth_naive_fcnot(files, capsys):
    assert run(["synth", "--input", files.fb, "--target", "fcnot", "--naive"]) == 0
    out, err = capsys.readouterr()
    assert out == ("circuit fcnot vars 3\nL -x1 +x2 -x3 ; y\nL -x1 +x2 +x3 ; y\n"
                   "L +x1 -x2 +x3 ; y\nL +x1 +x2 -x3 ; y\n")
    assert "basic NOT=10 TOF=4" in err and "verified: yes" in err


def test_synth_exact_fcps(files, capsys):
    assert run(["synth", "--input", files.fb, "--target", "fcps", "--exact"]) == 0
    assert capsys.readouterr().out == "circuit fcps vars 3\nR +x2\nR +x1 +x3\n"


def test_synth_hardware_picks_parity_form(files, capsys):
    assert run(["synth", "--input", files.fb, "--target", "fcps", "--exact", "--hardware", files.path]) == 0
    out, err = capsys.readouterr()
    assert out == "circuit fcps vars 3\nR +x2 -x3\nCNOT x1 x2\nR +x2 +x3\nCNOT x1 x2\n"
    assert "swaps 0" in err


def test_synth_out_file_and_qasm(files, capsys):
    dest = files.dir / "c.qasm"
    assert run(["synth", "--input", files.fb, "--target", "fcnot", "--emit", "qasm", "--out", str(dest)]) == 0
    assert capsys.readouterr().out == ""
    text = dest.read_text()
    assert text.startswith("OPENQASM 3.0;") and "ccx x[0], x[2], y[0];" in text


@pytest.mark.parametrize("argv", [
    ["synth", "--target", "fcnot"],
    ["synth", "--input", "missing.tt", "--target", "fcnot"],
    ["synth", "--input", "X", "--target", "toffoli"],
    ["synth", "--input", "X", "--target", "fcnot", "--naive", "--exact"],
    ["frobnicate"],
    [],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == 2


def test_bad_table_is_a_parse_error(files, capsys):
    bad = files("bad.tt", "vars 2\n00 0\n")
    assert run(["synth", "--input", bad, "--target", "fcnot"]) == 2
    assert "missing" in capsys.readouterr().err


def test_verify_equivalent(files, capsys):
    c = files("two_term.qc", "circuit fcnot vars 3\nL +x2 ; y\nL +x1 +x3 ; y\n")
    assert run(["verify", "--circuit", c, "--input", files.fb]) == 0
    assert capsys.readouterr().out == "EQUIVALENT\n"


def test_verify_u_prime(files, capsys):
    c = files("u.qc", "circuit fcnot vars 3\nL -x1 +x2 ; y\nL +x2 -x3 ; y\nL +x1 -x2 +x3 ; y\n")
    assert run(["verify", "--circuit", c, "--input", files.fb]) == 1
    assert capsys.readouterr().out == "NOT EQUIVALENT\nwitness x=010\n"


def test_verify_or_counterexample(files, capsys):
    c = files("or.qc", "circuit fcnot vars 2\nCNOT x1 y\nCNOT x2 y\n")
    t = files("or.tt", "vars 2\n00 0\n01 1\n10 1\n11 1\n")
    assert run(["verify", "--circuit", c, "--input", t]) == 1
    assert "witness x=11" in capsys.readouterr().out


def test_verify_lowered_fcps_with_hadamards(files, capsys):
    c = files("h.qc", "circuit fcps vars 3\nH x2\nNOT x2\nH x2\nH x3\nCNOT x1 x3\nH x3\n")
    assert run(["verify", "--circuit", c, "--input", files.fb]) == 0


def test_verify_arity_mismatch_and_control_damage(files, capsys):
    c = files("two.qc", "circuit fcnot vars 2\nCNOT x1 y\n")
    assert run(["verify", "--circuit", c, "--input", files.fb]) == 2
    bad = files("bad.qc", "circuit fcnot vars 3\nCNOT x1 x2\n")
    assert run(["verify", "--circuit", bad, "--input", files.fb]) == 1


def test_cost(files, capsys):
    e18 = files("e18.qc", "circuit fcps vars 3\nR +x2\nR +x1 +x3\n")
    assert run(["cost", "--circuit", e18, "--hardware", files.path]) == 0
    out = capsys.readouterr().out
    assert "swaps 2 cost 6" in out and out.startswith("total 12\n")
    e17 = files("e17.qc", "circuit fcps vars 3\nR +x2 -x3\nCNOT x1 x2\nR +x2 +x3\nCNOT x1 x2\n")
    assert run(["cost", "--circuit", e17, "--hardware", files.path]) == 0
    assert "swaps 0 cost 0" in capsys.readouterr().out
    empty = files("empty.qc", "circuit fcps vars 3\n")
    assert run(["cost", "--circuit", empty, "--hardware", files.path]) == 0
    assert capsys.readouterr().out.startswith("total 0\n")
    fc = files("fc.qc", "circuit fcnot vars 3\nL +x2 ; y\n")
    assert run(["cost", "--circuit", fc, "--hardware", files.path]) == 2


def test_kmap_plain(files, capsys):
    assert run(["kmap", "--input", files.fb]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1].split() == ["x1", "00", "01", "11", "10"]
    assert lines[2].split() == ["0", "0", "0", "1", "1"]
    assert lines[3].split() == ["1", "0", "1", "0", "1"]


def test_kmap_cover_shares_a_zero_cell(files, capsys):
    assert run(["kmap", "--input", files.fb, "--cover"]) == 0
    out = capsys.readouterr().out
    assert "A = x2" in out and "B = x1 x3" in out
    assert "111: 0-cell in 2 groups (A, B)" in out
    assert "parity rule: OK" in out


def test_kmap_constant_zero_and_arity(files, capsys):
    z = files("z.tt", "vars 4\nhex 0000\n")
    assert run(["kmap", "--input", z, "--cover"]) == 0
    out = capsys.readouterr().out
    assert "groups: none" in out and "1" not in out.split("groups")[0].splitlines()[2]
    two = files("two.tt", "vars 2\nhex f\n")
    assert run(["kmap", "--input", two]) == 2


def test_render_kmap_flags_violations(f_b):
    text = render_kmap(f_b, ParityCover.parse(3, "-1-"))
    assert "VIOLATED at 101, 111" in text


def test_explain_f_b(files, capsys):
    assert run(["explain", "--input", files.fb, "--target", "fcnot"]) == 0
    out = capsys.readouterr().out
    trace = [l.split(":")[0].split(". ")[1] for l in out.splitlines() if l.startswith("  ") and ". " in l]
    assert trace == ["RULE_III_INSERT", "RULE_I", "RULE_I", "RULE_I", "RULE_I"]
    assert "final circuit:\ncircuit fcnot vars 3\nL +x2 ; y\nL +x1 +x3 ; y\n" in out


def test_explain_trivial_cases(files, capsys):
    z = files("z.tt", "vars 3\nhex 00\n")
    assert run(["explain", "--input", z, "--target", "fcnot"]) == 0
    assert capsys.readouterr().out == "empty circuit; nothing to explain\n"
    x1 = files("x1.tt", "vars 1\n0 0\n1 1\n")
    assert run(["explain", "--input", x1, "--target", "fcnot"]) == 0
    out = capsys.readouterr().out
    assert out.rstrip().endswith("basic gates:\n  CNOT x1 y")
    big = files("big.tt", "vars 5\nhex 00000000\n")
    assert run(["explain", "--input", big, "--target", "fcnot"]) == 2


def test_synth_verify_round_trip_500(tmp_path, capsys):
    rng = random.Random(2024)
    failures = []
    for i in range(500):
        n = rng.randint(1, 8)
        f = TruthTable.from_mask(n, rng.getrandbits(1 << n))
        kind = rng.choice(["fcnot", "fcps"])
        tt = tmp_path / "f.tt"
        tt.write_text(format_truth_table(f))
        qc = tmp_path / "f.qc"
        if run(["synth", "--input", str(tt), "--target", kind, "--out", str(qc)]) != 0:
            failures.append(("synth", i))
        elif run(["verify", "--circuit", str(qc), "--input", str(tt)]) != 0:
            failures.append(("verify", i))
    capsys.readouterr()
    assert failures == []


def test_entry_point_is_deterministic(files):
    cmd = [sys.executable, "-m", "qclogic", "synth", "--input", files.fb, "--target", "fcps"]
    a = subprocess.run(cmd, capture_output=True, text=True)
    b = subprocess.run(cmd, capture_output=True, text=True)
    assert a.returncode == 0 and a.stdout == b.stdout and a.stderr == b.stderr
