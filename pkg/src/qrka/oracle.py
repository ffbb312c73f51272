"""Bit-flip related-key oracle with query metering.

The hidden key is reachable only through the :class:`Examiner` handed out by
:meth:`RelatedKeyOracle.create`; attack code receives the oracle alone.
"""
from __future__ import annotations

import threading
from typing import Sequence

import numpy as np

from qrka.cipher import CipherParams, ToyCipher, _as_int, check_desk_scale
from qrka.gf2 import BitVec


class Examiner:
    """Test/verdict capability exposing the oracle's secret key."""

    __slots__ = ("_key", "_width")

    def __init__(self, key: int, width: int):
        self._key = key
        self._width = width

    @property
    def secret_key(self) -> BitVec:
        return BitVec(self._key, self._width)

    def is_key(self, candidate) -> bool:
        return _as_int(candidate, self._width, "candidate") == self._key


class RelatedKeyOracle:
    """Answers ``E_{K xor L}(m)`` and ``E_{K xor L}^{-1}(c)`` for caller-chosen masks ``L``."""

    def __init__(self, cipher, key, _token=None):
        if _token is not _CREATE:
            raise TypeError("use RelatedKeyOracle.create(...)")
        self.cipher = cipher if isinstance(cipher, ToyCipher) else ToyCipher(cipher)
        self.params: CipherParams = self.cipher.params
        self.__key = _as_int(key, self.params.key_bits, "key")
        self._lock = threading.Lock()
        self._classical = 0
        self._decrypt = 0
        self._superposition = 0
        self._tables: dict[tuple[int, ...], np.ndarray] = {}

    @classmethod
    def create(cls, cipher, key=None, rng=None) -> tuple[RelatedKeyOracle, Examiner]:
        """Build an oracle and its examiner; ``key`` defaults to a uniform draw."""
        c = cipher if isinstance(cipher, ToyCipher) else ToyCipher(cipher)
        k = c.params.key_bits
        if key is None:
            rng = np.random.default_rng(rng)
            key = int.from_bytes(rng.bytes((k + 7) // 8), "big") & ((1 << k) - 1)
        oracle = cls(c, key, _token=_CREATE)
        return oracle, Examiner(oracle.__key, k)

    def __repr__(self):
        return f"RelatedKeyOracle({self.params!r})"

    @property
    def classical_query_count(self) -> int:
        """Classical queries to the encryption oracle."""
        return self._classical

    @property
    def decrypt_query_count(self) -> int:
        return self._decrypt

    @property
    def superposition_query_count(self) -> int:
        return self._superposition

    def _bump(self, attr: str):
        with self._lock:
            setattr(self, attr, getattr(self, attr) + 1)

    def related_encrypt(self, mask, block):
        p = self.params
        L = _as_int(mask, p.key_bits, "mask")
        self._bump("_classical")
        return self.cipher.encrypt(self.__key ^ L, block)

    def related_decrypt(self, mask, block):
        p = self.params
        L = _as_int(mask, p.key_bits, "mask")
        self._bump("_decrypt")
        return self.cipher.decrypt(self.__key ^ L, block)

    def superposition_encrypt_tuple(self, plaintexts: Sequence) -> np.ndarray:
        """One coherent query over all masks: row ``L`` holds ``E_{K xor L}(m)``.

        Returns a read-only ``(2^k, r)`` uint64 array.  The table is memoised
        per plaintext tuple, but every call is metered as one query.
        """
        p = self.params
        check_desk_scale(p.key_bits)
        blocks = tuple(_as_int(m, p.block_bits, "plaintext") for m in plaintexts)
        self._bump("_superposition")
        with self._lock:
            table = self._tables.get(blocks)
        if table is None:
            masks = np.arange(1 << p.key_bits, dtype=np.uint64)
            table = self.cipher.tuple_table(blocks, masks ^ np.uint64(self.__key))
            table.setflags(write=False)
            with self._lock:
                self._tables[blocks] = table
        return table


_CREATE = object()
