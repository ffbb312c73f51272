"""Linear algebra over GF(2) on bit-packed Python integers.

Vectors are stored as a single ``int`` (bit ``i`` is coordinate ``i``); Python's
arbitrary-precision integers give word-parallel XOR for free.  String forms are
written most-significant bit first, so ``BitVec.from_str("0001")`` has value 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence


class WidthMismatch(ValueError):
    pass


@dataclass(frozen=True)
class BitVec:
    value: int
    width: int

    def __post_init__(self):
        if self.width < 1:
            raise ValueError(f"width must be positive, got {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value {self.value} does not fit in {self.width} bits")

    @classmethod
    def from_str(cls, s: str) -> BitVec:
        s = s.replace("_", "")
        return cls(int(s, 2), len(s))

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> BitVec:
        """Build from a coordinate list, ``bits[i]`` being coordinate ``i``."""
        value = 0
        for i, b in enumerate(bits):
            if b not in (0, 1):
                raise ValueError(f"not a bit: {b!r}")
            value |= b << i
        return cls(value, len(bits))

    @classmethod
    def zero(cls, width: int) -> BitVec:
        return cls(0, width)

    def bits(self) -> list[int]:
        return [(self.value >> i) & 1 for i in range(self.width)]

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.width:
            raise IndexError(i)
        return (self.value >> i) & 1

    def __len__(self):
        return self.width

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def _check(self, other: BitVec):
        if not isinstance(other, BitVec):
            raise TypeError(f"expected BitVec, got {type(other).__name__}")
        if other.width != self.width:
            raise WidthMismatch(f"widths differ: {self.width} vs {other.width}")

    def __xor__(self, other: BitVec) -> BitVec:
        self._check(other)
        return BitVec(self.value ^ other.value, self.width)

    def __and__(self, other: BitVec) -> BitVec:
        self._check(other)
        return BitVec(self.value & other.value, self.width)

    def __str__(self):
        return format(self.value, f"0{self.width}b")


def dot(a: BitVec, b: BitVec) -> int:
    """Inner product over GF(2): parity of the bitwise AND."""
    if a.width != b.width:
        raise WidthMismatch(f"widths differ: {a.width} vs {b.width}")
    return (a.value & b.value).bit_count() & 1


def parity(x: int) -> int:
    return x.bit_count() & 1


def _reduce(v: int, echelon: Sequence[int]) -> int:
    # echelon rows have distinct leading bits, sorted by leading bit descending
    for row in echelon:
        if (v >> (row.bit_length() - 1)) & 1:
            v ^= row
    return v


def _echelon(rows: Iterable[int]) -> tuple[int, ...]:
    basis: list[int] = []
    for r in rows:
        r = _reduce(r, basis)
        if r:
            basis.append(r)
            basis.sort(reverse=True)
    return tuple(basis)


@dataclass(frozen=True)
class BitMatrix:
    """An ordered list of equal-width rows over GF(2)."""

    width: int
    rows: tuple[int, ...] = ()

    def __post_init__(self):
        if self.width < 1:
            raise ValueError(f"width must be positive, got {self.width}")
        limit = 1 << self.width
        for r in self.rows:
            if not 0 <= r < limit:
                raise WidthMismatch(f"row {r:#x} does not fit in {self.width} bits")

    @classmethod
    def from_vectors(cls, vectors: Sequence[BitVec], width: int | None = None) -> BitMatrix:
        if width is None:
            if not vectors:
                raise ValueError("width is required for an empty matrix")
            width = vectors[0].width
        for v in vectors:
            if v.width != width:
                raise WidthMismatch(f"row width {v.width} != {width}")
        return cls(width, tuple(v.value for v in vectors))

    @classmethod
    def from_strs(cls, rows: Sequence[str], width: int | None = None) -> BitMatrix:
        return cls.from_vectors([BitVec.from_str(r) for r in rows], width)

    def vectors(self) -> list[BitVec]:
        return [BitVec(r, self.width) for r in self.rows]

    def __len__(self):
        return len(self.rows)

    @cached_property
    def echelon(self) -> tuple[int, ...]:
        """Row-echelon basis of the row space (distinct leading bits, descending)."""
        leads = [r.bit_length() for r in self.rows]
        if 0 not in leads and leads == sorted(set(leads), reverse=True):
            return self.rows
        return _echelon(self.rows)

    @property
    def rank(self) -> int:
        return len(self.echelon)


def rank(m: BitMatrix) -> int:
    return m.rank


def in_span(m: BitMatrix, v: BitVec) -> bool:
    if v.width != m.width:
        raise WidthMismatch(f"widths differ: {m.width} vs {v.width}")
    return _reduce(v.value, m.echelon) == 0


def add_if_independent(m: BitMatrix, v: BitVec) -> tuple[BitMatrix, bool]:
    """Append ``v`` to ``m`` iff it is outside the row span.

    The appended row is ``v`` reduced against the existing pivots, so a matrix
    grown only through this function stays in echelon form and each call costs
    one reduction pass.
    """
    if v.width != m.width:
        raise WidthMismatch(f"widths differ: {m.width} vs {v.width}")
    basis = m.echelon
    r = _reduce(v.value, basis)
    if r == 0:
        return m, False
    if basis is not m.rows:
        return BitMatrix(m.width, m.rows + (v.value,)), True
    return BitMatrix(m.width, tuple(sorted(basis + (r,), reverse=True))), True


def kernel_basis(m: BitMatrix) -> list[BitVec]:
    """Basis of ``{v : dot(row, v) == 0 for every row}``."""
    width = m.width
    # reduced row echelon form keyed by pivot column
    pivots: dict[int, int] = {}
    for row in m.echelon:
        p = row.bit_length() - 1
        for q, other in pivots.items():
            if (row >> q) & 1:
                row ^= other
        for q in list(pivots):
            if (pivots[q] >> p) & 1:
                pivots[q] ^= row
        pivots[p] = row
    basis = []
    for free in range(width):
        if free in pivots:
            continue
        v = 1 << free
        for p, row in pivots.items():
            if (row >> free) & 1:
                v |= 1 << p
        basis.append(BitVec(v, width))
    return basis
