import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qclogic.logic import (
    ArityError,
    Assignment,
    Cube,
    KMapLayout,
    ParityCover,
    Phase,
    Polarity,
    TruthTable,
    TruthTableParseError,
    all_cubes,
    cover_evaluate,
    cover_validate,
    format_truth_table,
    gray_code,
    kmap_cells,
    minterm_cover,
    parse_truth_table,
)


def test_assignment_indexing_msb_first():
    a = Assignment.from_string("101")
    assert a.index == 5
    assert a[1] == 1 and a[2] == 0 and a[3] == 1
    assert Assignment.from_index(3, 5) == a
    assert str(a) == "101"


def test_assignment_rejects_bad_bits():
    with pytest.raises(ArityError):
        Assignment(3, (0, 1))
    with pytest.raises(ValueError):
        Assignment(2, (0, 2))


def test_table_i_values(f_b):
    ones = [str(Assignment.from_index(3, i)) for i in range(8) if f_b.values[i]]
    assert ones == ["010", "011", "101", "110"]


def test_hex_round_trip(f_b):
    assert f_b.hex() == "36"
    assert TruthTable.from_hex(3, "36") == f_b
    assert parse_truth_table("vars 3\nhex 36\n") == f_b


@pytest.mark.parametrize("n, text", [(1, "8"), (2, "f"), (1, "4"), (2, "1")])
def test_hex_short_tables(n, text):
    f = TruthTable.from_hex(n, text)
    assert f.hex() == text


def test_hex_padding_must_be_zero():
    with pytest.raises(TruthTableParseError):
        TruthTable.from_hex(1, "9")
    with pytest.raises(TruthTableParseError):
        TruthTable.from_hex(3, "3")


@pytest.mark.parametrize("text", [
    "",
    "vars x\n",
    "vars 2\n00 0\n01 1\n10 1\n",
    "vars 2\n00 0\n00 1\n10 1\n11 0\n",
    "vars 2\n00 0\n01 -\n10 1\n11 0\n",
    "vars 2\n0 0\n",
    "vars 0\n",
])
def test_parse_errors(text):
    with pytest.raises(TruthTableParseError):
        parse_truth_table(text)


def test_parse_ignores_comments_and_order():
    f = parse_truth_table("# or\nvars 2\n11 1\n00 0\n  10 1\n01 1\n")
    assert f.values == bytes([0, 1, 1, 1])


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << (1 << n)) - 1))))
def test_format_parse_round_trip(nm):
    n, mask = nm
    f = TruthTable.from_mask(n, mask)
    assert parse_truth_table(format_truth_table(f)) == f
    assert parse_truth_table(format_truth_table(f, rows=True)) == f
    assert f.mask == mask


def test_cube_pla_and_str():
    c = Cube.from_pla("-10")
    assert str(c) == "x2 ~x3"
    assert c.pla() == "-10"
    p = Cube.from_pla("^^1")
    assert p.parity.phase is Phase.ODD
    assert str(p) == "(x1^x2) x3"
    assert Cube.from_pla("==-").parity.phase is Phase.EVEN


def test_cube_rejects_malformed_parity():
    with pytest.raises(ValueError):
        Cube.from_pla("^--")
    with pytest.raises(ValueError):
        Cube.from_pla("^=-")


@pytest.mark.parametrize("pla", ["1-0", "^^1", "==0-", "---", "0101"])
def test_cube_matching_agrees_with_definition(pla):
    c = Cube.from_pla(pla)
    n = c.n
    for idx in range(1 << n):
        a = Assignment.from_index(n, idx)
        ok = True
        for i, ch in enumerate(pla, start=1):
            if ch in "01" and a[i] != int(ch):
                ok = False
        if c.parity is not None:
            x = a[c.parity.var_a] ^ a[c.parity.var_b]
            ok = ok and x == (1 if c.parity.phase is Phase.ODD else 0)
        assert c.matches_index(idx) == ok
        assert bool(c.truth_vector()[idx]) == ok
        assert bool((c.table_mask >> idx) & 1) == ok


def test_minterm_cube():
    c = Cube.minterm(3, 0b010)
    assert c.is_minterm and c.pla() == "010"
    assert not Cube.from_pla("01-").is_minterm


def test_cover_xor_cancels_pairs():
    c = Cube.from_pla("1-1")
    cov = ParityCover.xor_of(3, [c, Cube.from_pla("-1-"), c])
    assert cov == ParityCover.parse(3, "-1-")


def test_parity_form_and_two_term_compute_f_b(f_b):
    for cov in (ParityCover.parse(3, "-1-", "1-1"), ParityCover.parse(3, "-10", "^^1")):
        assert cover_validate(cov, f_b)
        assert cov.to_truth_table() == f_b


def test_validation_reports_counterexamples(f_b):
    rep = cover_validate(ParityCover.parse(3, "-1-"), f_b)
    assert not rep
    assert [str(a) for a in rep.mismatches] == ["101", "111"]
    assert rep.status == "FAIL"


def test_minterm_cover_of_constants():
    assert len(minterm_cover(TruthTable.constant(3, 0))) == 0
    assert len(minterm_cover(TruthTable.constant(2, 1))) == 4


@given(st.integers(0, 255))
def test_minterm_cover_is_valid(mask):
    f = TruthTable.from_mask(3, mask)
    cov = minterm_cover(f)
    assert cover_validate(cov, f)
    for i in range(8):
        assert cover_evaluate(cov, Assignment.from_index(3, i)) == f.values[i]


def test_all_cubes_counts():
    assert len(all_cubes(3)) == 27
    # parity cubes: choose the pair, its phase, and a literal for each other variable
    assert len(all_cubes(3, parity=True)) == 27 + 3 * 2 * 3
    assert len(set(all_cubes(4, parity=True))) == len(all_cubes(4, parity=True))


def test_gray_code_adjacent_cells_differ_in_one_bit():
    for bits in (1, 2, 3):
        seq = gray_code(bits)
        for a, b in zip(seq, seq[1:] + seq[:1]):
            assert sum(x != y for x, y in zip(a, b)) == 1


@pytest.mark.parametrize("n", [3, 4])
def test_kmap_cells_cover_every_assignment(n):
    grid = kmap_cells(KMapLayout.default(n))
    flat = [a.index for row in grid for a in row]
    assert sorted(flat) == list(range(1 << n))
    for row in grid:
        for a, b in itertools.pairwise(row):
            assert bin(a.index ^ b.index).count("1") == 1


def test_kmap_layout_arity():
    with pytest.raises(ArityError):
        KMapLayout.default(2)
    with pytest.raises(ArityError):
        KMapLayout.default(5)


def test_truth_table_call_and_array(f_b):
    assert f_b(Assignment.from_string("010")) == 1
    assert np.array_equal(f_b.array, np.array([0, 0, 1, 1, 0, 1, 1, 0], dtype=np.uint8))
    assert f_b.ones() == [2, 3, 5, 6]
    assert Polarity("1") is Polarity.POSITIVE
