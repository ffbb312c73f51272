import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrka.gf2 import (BitMatrix, BitVec, WidthMismatch, add_if_independent, dot, in_span,
                      kernel_basis, rank)


def span(rows, width):
    """Brute-force enumeration of the row span."""
    out = {0}
    for r in rows:
        out |= {v ^ r for v in out}
    return out


@st.composite
def matrices(draw, max_width=12, max_rows=14):
    width = draw(st.integers(1, max_width))
    rows = draw(st.lists(st.integers(0, (1 << width) - 1), max_size=max_rows))
    return BitMatrix(width, tuple(rows))


@pytest.mark.parametrize("a, b, expected", [
    ("0000", "1011", 0),
    ("1011", "1011", 1),
    ("1100", "0110", 1),
])
def test_dot_examples(a, b, expected):
    assert dot(BitVec.from_str(a), BitVec.from_str(b)) == expected


def test_dot_width_mismatch():
    with pytest.raises(WidthMismatch):
        dot(BitVec.from_str("101"), BitVec.from_str("1010"))


def test_xor_width_mismatch():
    with pytest.raises(WidthMismatch):
        BitVec.from_str("101") ^ BitVec.from_str("1010")


def test_bitvec_string_is_msb_first():
    v = BitVec.from_str("0001")
    assert v.value == 1 and v[0] == 1 and v[3] == 0
    assert str(v) == "0001"
    assert BitVec.from_bits([1, 0, 0, 0]) == v


def test_bitvec_rejects_overflow():
    with pytest.raises(ValueError):
        BitVec(16, 4)


def test_add_if_independent_examples():
    empty = BitMatrix(4)
    m, ok = add_if_independent(empty, BitVec.from_str("0000"))
    assert not ok and m.rank == 0
    m, ok = add_if_independent(empty, BitVec.from_str("0101"))
    assert ok and m.rank == 1
    m = BitMatrix.from_strs(["1100", "0011"])
    m2, ok = add_if_independent(m, BitVec.from_str("1111"))
    assert not ok and m2.rank == 2


def test_kernel_examples():
    m = BitMatrix.from_strs(["1000", "0100", "0010"])
    assert kernel_basis(m) == [BitVec.from_str("0001")]
    assert len(kernel_basis(BitMatrix(3))) == 3


def test_kernel_random_6x8_against_enumeration():
    rng = random.Random(7)
    m = BitMatrix(8, tuple(rng.randrange(256) for _ in range(6)))
    basis = kernel_basis(m)
    brute = {v for v in range(256) if all(bin(v & r).count("1") % 2 == 0 for r in m.rows)}
    assert span([b.value for b in basis], 8) == brute
    assert len(basis) == 8 - m.rank


@given(matrices())
def test_kernel_vectors_are_orthogonal(m):
    for v in kernel_basis(m):
        for r in m.vectors():
            assert dot(r, v) == 0


@given(matrices(max_width=16, max_rows=20))
def test_rank_nullity(m):
    assert rank(m) + len(kernel_basis(m)) == m.width


@given(matrices(max_width=10))
def test_kernel_basis_spans_brute_force_kernel(m):
    basis = [b.value for b in kernel_basis(m)]
    brute = {v for v in range(1 << m.width)
             if all(bin(v & r).count("1") % 2 == 0 for r in m.rows)}
    assert span(basis, m.width) == brute
    assert len(span(basis, m.width)) == 1 << len(basis)  # independent


@settings(max_examples=200)
@given(matrices(max_width=12), st.data())
def test_add_if_independent_matches_span_enumeration(m, data):
    v = BitVec(data.draw(st.integers(0, (1 << m.width) - 1)), m.width)
    outside = v.value not in span(m.rows, m.width)
    m2, accepted = add_if_independent(m, v)
    assert accepted == outside
    assert in_span(m, v) == (not outside)
    assert m2.rank == m.rank + accepted
    if accepted:
        assert len(m2) == len(m) + 1
        assert span(m2.rows, m.width) == span(m.rows + (v.value,), m.width)
    else:
        assert m2 == m


def test_incremental_growth_stays_consistent():
    rng = random.Random(3)
    width = 20
    m = BitMatrix(width)
    rows = []
    for _ in range(40):
        v = BitVec(rng.randrange(1 << width), width)
        before = m.rank
        m, ok = add_if_independent(m, v)
        rows.append(v.value)
        assert m.rank == before + ok
        assert m.rank == BitMatrix(width, tuple(rows)).rank
    assert m.rank == width


def test_exhaustive_tiny_widths():
    for width in (1, 2, 3):
        vals = range(1 << width)
        for rows in itertools.product(vals, repeat=2):
            m = BitMatrix(width, rows)
            assert m.rank + len(kernel_basis(m)) == width
