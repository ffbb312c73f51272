"""The hiding function ``x -> {E_x(m), E_{s xor x}(m)}`` and its canonical encoding.

A two-element set of ciphertext tuples is stored as the ordered pair
``(min, max)``, each tuple read as a big-endian unsigned integer of ``r*n``
bits.  Big-endian concatenation makes integer order coincide with
lexicographic order on the blocks, which the vectorised path relies on.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from qrka.cipher import ToyCipher, _as_int, _cipher, check_desk_scale
from qrka.gf2 import BitVec
from qrka.oracle import RelatedKeyOracle


class UnicityViolation(RuntimeError):
    """Both elements of ``f_s(x)`` coincide: ``s == 0`` or the plaintexts do not pin the key."""

    def __init__(self, message: str, x: int):
        super().__init__(message)
        self.x = x


def interpret_as_integer(blocks: Sequence[int], block_bits: int) -> int:
    value = 0
    for b in blocks:
        value = (value << block_bits) | _as_int(b, block_bits, "block")
    return value


@dataclass(frozen=True)
class SetEncoding:
    lo: tuple[int, ...]
    hi: tuple[int, ...]
    block_bits: int

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("lo and hi must have the same number of blocks")
        if interpret_as_integer(self.lo, self.block_bits) >= interpret_as_integer(self.hi, self.block_bits):
            raise ValueError("lo must be strictly below hi")

    @property
    def width(self) -> int:
        return 2 * len(self.lo) * self.block_bits

    @property
    def value(self) -> int:
        """The ``2rn``-bit representation ``lo || hi``."""
        return interpret_as_integer(self.lo + self.hi, self.block_bits)

    def to_bitvec(self) -> BitVec:
        return BitVec(self.value, self.width)


def encode_pair(c, c_prime, block_bits: int, x: int = -1) -> SetEncoding:
    c, c_prime = tuple(int(v) for v in c), tuple(int(v) for v in c_prime)
    a = interpret_as_integer(c, block_bits)
    b = interpret_as_integer(c_prime, block_bits)
    if a == b:
        raise UnicityViolation(f"E_x(m) == E_(s^x)(m) at x={x}: set collapses to a singleton", x)
    lo, hi = (c, c_prime) if a < b else (c_prime, c)
    return SetEncoding(lo, hi, block_bits)


def evaluate(x, plaintexts: Sequence, cipher, oracle: RelatedKeyOracle) -> SetEncoding:
    """``f_s(x)`` from the attacker's side: local ``E_x`` plus ``r`` oracle calls at mask ``x``."""
    c = _cipher(cipher)
    p = c.params
    xv = _as_int(x, p.key_bits, "x")
    local = c.encrypt_tuple(xv, plaintexts)
    related = tuple(oracle.related_encrypt(xv, m) for m in plaintexts)
    return encode_pair(local, related, p.block_bits, xv)


@lru_cache(maxsize=16)
def _local_table(cipher: ToyCipher, plaintexts: tuple[int, ...]) -> np.ndarray:
    table = cipher.tuple_table(plaintexts)
    table.setflags(write=False)
    return table


def _lex_less(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    less = np.zeros(a.shape[0], dtype=bool)
    equal = np.ones(a.shape[0], dtype=bool)
    for j in range(a.shape[1]):
        less |= equal & (a[:, j] < b[:, j])
        equal &= a[:, j] == b[:, j]
    return less, equal


@dataclass(frozen=True)
class FullDomainTable:
    """``f_s`` tabulated over all ``2^k`` inputs; row ``x`` is ``lo || hi`` (``2r`` blocks)."""

    encodings: np.ndarray
    key_bits: int
    block_bits: int

    @property
    def pairs(self) -> int:
        return self.encodings.shape[1] // 2

    def __len__(self):
        return self.encodings.shape[0]

    def __getitem__(self, x: int) -> SetEncoding:
        row = [int(v) for v in self.encodings[x]]
        r = self.pairs
        return SetEncoding(tuple(row[:r]), tuple(row[r:]), self.block_bits)

    def preimage(self, x: int) -> np.ndarray:
        """All inputs whose encoding equals that of ``x``."""
        return np.flatnonzero(np.all(self.encodings == self.encodings[x], axis=1))


def evaluate_full_domain(plaintexts: Sequence, cipher, oracle: RelatedKeyOracle) -> FullDomainTable:
    """Tabulate ``f_s`` with one superposition query and ``2^k`` local evaluations."""
    c = _cipher(cipher)
    p = c.params
    check_desk_scale(p.key_bits)
    blocks = tuple(_as_int(m, p.block_bits, "plaintext") for m in plaintexts)
    related = oracle.superposition_encrypt_tuple(blocks)
    local = _local_table(c, blocks)
    less, equal = _lex_less(local, related)
    if equal.any():
        x = int(np.flatnonzero(equal)[0])
        raise UnicityViolation(f"E_x(m) == E_(s^x)(m) at x={x}: set collapses to a singleton", x)
    sel = less[:, None]
    enc = np.concatenate([np.where(sel, local, related), np.where(sel, related, local)], axis=1)
    enc.setflags(write=False)
    return FullDomainTable(enc, p.key_bits, p.block_bits)
