"""A scalable toy SPN block cipher and brute-force unicity machinery.

Round ``i`` (``0 <= i < rounds``) XORs round key ``i``, applies the PRESENT
S-box to every nibble and then a PRESENT-style bit permutation; a final XOR with
round key ``rounds`` whitens the output.  The key schedule is linear: for
``k == n`` round key ``i`` is the key rotated left by ``i``; for ``k == c*n`` the
round keys cycle through the ``c`` key words (most significant first), word
``i % c`` rotated by ``i``; for ``k < n`` the key is repeated cyclically to ``n``
bits and then rotated as in the ``k == n`` case.

Both a scalar (Python ``int``) path and a numpy path vectorised over keys and
blocks are provided; the attack and the exhaustive checks use the latter.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from qrka.gf2 import BitVec, WidthMismatch

SBOX = (0xC, 0x5, 0x6, 0xB, 0x9, 0x0, 0xA, 0xD, 0x3, 0xE, 0xF, 0x8, 0x4, 0x7, 0x1, 0x2)
SBOX_INV = tuple(SBOX.index(v) for v in range(16))

DEFAULT_ROUNDS = 6
MAX_DESK_KEY_BITS = 20
MAX_BLOCK_BITS = 64


class NotDeskScale(ValueError):
    """Raised when an operation would enumerate an infeasibly large key space."""


class UnicityError(RuntimeError):
    def __init__(self, message: str, collisions: int, attempts: int):
        super().__init__(message)
        self.collisions = collisions
        self.attempts = attempts


@dataclass(frozen=True)
class CipherParams:
    key_bits: int
    block_bits: int
    rounds: int = DEFAULT_ROUNDS

    def __post_init__(self):
        k, n = self.key_bits, self.block_bits
        if k < 1 or n < 1:
            raise ValueError("key_bits and block_bits must be positive")
        if n % 4:
            raise ValueError(f"block_bits must be a multiple of 4 (S-box width), got {n}")
        if n > MAX_BLOCK_BITS:
            raise ValueError(f"block_bits above {MAX_BLOCK_BITS} is not supported")
        if k > n and k % n:
            raise ValueError(f"key_bits must be <= block_bits or a multiple of it, got k={k}, n={n}")
        if self.rounds < 2:
            raise ValueError(f"rounds must be >= 2, got {self.rounds}")
        if self.rounds + 1 < self.key_words:
            raise ValueError("too few rounds to use every key word")

    @property
    def key_words(self) -> int:
        return max(1, self.key_bits // self.block_bits)


def check_desk_scale(key_bits: int):
    if key_bits > MAX_DESK_KEY_BITS:
        raise NotDeskScale(
            f"key space 2^{key_bits} is not desk-scale (limit 2^{MAX_DESK_KEY_BITS})")


def pbox(n: int) -> tuple[int, ...]:
    """Destination of each bit: ``i -> i*n/4 mod (n-1)``, top bit fixed."""
    if n == 4:
        return (0, 1, 2, 3)
    q = n // 4
    return tuple((i * q) % (n - 1) for i in range(n - 1)) + (n - 1,)


def _as_int(v, width: int, what: str) -> int:
    if isinstance(v, BitVec):
        if v.width != width:
            raise WidthMismatch(f"{what} has width {v.width}, expected {width}")
        return v.value
    v = int(v)
    if not 0 <= v < (1 << width):
        raise WidthMismatch(f"{what} {v:#x} does not fit in {width} bits")
    return v


class ToyCipher:
    """Keyed permutation family ``E_K`` on ``n``-bit blocks."""

    def __init__(self, params: CipherParams):
        self.params = params
        n = params.block_bits
        self.mask = (1 << n) - 1
        perm = pbox(n)
        self.perm = perm
        nibbles = n // 4
        # per-nibble lookup tables: S-box fused with the bit permutation
        self._sp = []
        self._pinv = []
        for j in range(nibbles):
            sp, pinv = [], []
            for v in range(16):
                s = SBOX[v] << (4 * j)
                out = 0
                inv = 0
                for b in range(4):
                    src = 4 * j + b
                    if (s >> src) & 1:
                        out |= 1 << perm[src]
                    if (v >> b) & 1:
                        inv |= 1 << perm.index(src)
                sp.append(out)
                pinv.append(inv)
            self._sp.append(sp)
            self._pinv.append(pinv)
        self._sp_np = [np.array(t, dtype=np.uint64) for t in self._sp]
        self._pinv_np = [np.array(t, dtype=np.uint64) for t in self._pinv]
        self._sinv_np = np.array(SBOX_INV, dtype=np.uint64)

    def __repr__(self):
        return f"{type(self).__name__}({self.params!r})"

    # key schedule -------------------------------------------------------

    def _key_words(self, key, mask):
        p = self.params
        k, n = p.key_bits, p.block_bits
        if k <= n:
            e = key
            for j in range(1, -(-n // k)):
                e = e | (key << (j * k))
            return [e & mask]
        c = k // n
        return [(key >> (n * (c - 1 - j))) & mask for j in range(c)]

    def _rotl(self, x, r: int, mask):
        n = self.params.block_bits
        r %= n
        if r == 0:
            return x
        return ((x << r) | (x >> (n - r))) & mask

    def round_keys(self, key):
        """Round keys for an ``int`` key or a uint64 array of keys."""
        mask = self.mask
        if isinstance(key, np.ndarray):
            key = key.astype(np.uint64, copy=False)
            mask = np.uint64(mask)
        words = self._key_words(key, mask)
        return [self._rotl(words[i % len(words)], i, mask) for i in range(self.params.rounds + 1)]

    # scalar path --------------------------------------------------------

    def encrypt(self, key, block):
        p = self.params
        k = _as_int(key, p.key_bits, "key")
        x = _as_int(block, p.block_bits, "block")
        rks = self.round_keys(k)
        for i in range(p.rounds):
            x ^= rks[i]
            y = 0
            for j, table in enumerate(self._sp):
                y |= table[(x >> (4 * j)) & 0xF]
            x = y
        x ^= rks[-1]
        return BitVec(x, p.block_bits) if isinstance(block, BitVec) else x

    def decrypt(self, key, block):
        p = self.params
        k = _as_int(key, p.key_bits, "key")
        x = _as_int(block, p.block_bits, "block")
        rks = self.round_keys(k)
        x ^= rks[-1]
        for i in reversed(range(p.rounds)):
            y = 0
            for j, table in enumerate(self._pinv):
                y |= table[(x >> (4 * j)) & 0xF]
            x = 0
            for j in range(len(self._pinv)):
                x |= SBOX_INV[(y >> (4 * j)) & 0xF] << (4 * j)
            x ^= rks[i]
        return BitVec(x, p.block_bits) if isinstance(block, BitVec) else x

    def encrypt_tuple(self, key, plaintexts: Sequence) -> tuple:
        return tuple(self.encrypt(key, m) for m in plaintexts)

    # vectorised path ----------------------------------------------------

    def encrypt_array(self, keys, blocks) -> np.ndarray:
        """Broadcast ``E_key(block)`` over uint64 arrays of keys and blocks."""
        keys = np.asarray(keys, dtype=np.uint64)
        x = np.asarray(blocks, dtype=np.uint64)
        rks = self.round_keys(keys)
        fifteen = np.uint64(0xF)
        shape = np.broadcast(x, keys).shape
        for i in range(self.params.rounds):
            x = x ^ rks[i]
            y = np.zeros(shape, dtype=np.uint64)
            for j, table in enumerate(self._sp_np):
                y |= table[(x >> np.uint64(4 * j)) & fifteen]
            x = y
        return x ^ rks[-1]

    def decrypt_array(self, keys, blocks) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.uint64)
        x = np.asarray(blocks, dtype=np.uint64)
        rks = self.round_keys(keys)
        fifteen = np.uint64(0xF)
        x = x ^ rks[-1]
        shape = np.broadcast(x, keys).shape
        for i in reversed(range(self.params.rounds)):
            y = np.zeros(shape, dtype=np.uint64)
            for j, table in enumerate(self._pinv_np):
                y |= table[(x >> np.uint64(4 * j)) & fifteen]
            x = np.zeros(shape, dtype=np.uint64)
            for j in range(len(self._pinv_np)):
                sh = np.uint64(4 * j)
                x |= self._sinv_np[(y >> sh) & fifteen] << sh
            x = x ^ rks[i]
        return x

    def tuple_table(self, plaintexts: Sequence, keys=None) -> np.ndarray:
        """``E_key(m_j)`` as an array of shape ``(len(keys), r)``.

        ``keys`` defaults to every key in ``{0,1}^k`` in natural order.
        """
        p = self.params
        if keys is None:
            check_desk_scale(p.key_bits)
            keys = np.arange(1 << p.key_bits, dtype=np.uint64)
        keys = np.asarray(keys, dtype=np.uint64)
        blocks = [_as_int(m, p.block_bits, "plaintext") for m in plaintexts]
        out = np.empty((keys.shape[0], len(blocks)), dtype=np.uint64)
        for j, m in enumerate(blocks):
            out[:, j] = self.encrypt_array(keys, np.uint64(m))
        return out


def _cipher(c) -> ToyCipher:
    return c if isinstance(c, ToyCipher) else ToyCipher(c)


def encrypt(cipher, key, block):
    return _cipher(cipher).encrypt(key, block)


def decrypt(cipher, key, block):
    return _cipher(cipher).decrypt(key, block)


def encrypt_tuple(cipher, key, plaintexts: Sequence) -> tuple:
    """ECB over a plaintext tuple: blockwise ``E_key``."""
    return _cipher(cipher).encrypt_tuple(key, plaintexts)


def min_unicity_pairs(key_bits: int, block_bits: int) -> int:
    """Least ``r`` with ``r > ceil(k/n)``."""
    if key_bits < 1 or block_bits < 1:
        raise ValueError("key_bits and block_bits must be positive")
    return math.ceil(key_bits / block_bits) + 1


def _collisions_with(table: np.ndarray, key: int) -> int:
    return int(np.all(table == table[key], axis=1).sum()) - 1


def _shared_rows(table: np.ndarray, block_bits: int) -> int:
    if table.shape[1] * block_bits <= 64:
        packed = np.zeros(table.shape[0], dtype=np.uint64)
        for j in range(table.shape[1]):
            packed = (packed << np.uint64(block_bits)) | table[:, j]
        _, counts = np.unique(packed, return_counts=True)
    else:
        _, counts = np.unique(table, axis=0, return_counts=True)
    return int(counts[counts > 1].sum())


def count_colliding_keys(cipher, plaintexts: Sequence, key) -> int:
    """Number of keys other than ``key`` that agree with it on every plaintext."""
    c = _cipher(cipher)
    check_desk_scale(c.params.key_bits)
    k = _as_int(key, c.params.key_bits, "key")
    if not plaintexts:
        return (1 << c.params.key_bits) - 1
    return _collisions_with(c.tuple_table(plaintexts), k)


def verify_unicity(cipher, plaintexts: Sequence, key) -> bool:
    """True iff ``key`` is the only key mapping ``plaintexts`` to its ciphertexts."""
    return count_colliding_keys(cipher, plaintexts, key) == 0


def count_key_collisions(cipher, plaintexts: Sequence) -> int:
    """Number of keys whose ciphertext tuple is shared with some other key (0 = injective)."""
    c = _cipher(cipher)
    check_desk_scale(c.params.key_bits)
    if not plaintexts:
        return 1 << c.params.key_bits
    return _shared_rows(c.tuple_table(plaintexts), c.params.block_bits)


def find_unicity_tuple(cipher, key, max_attempts: int = 32, rng=None,
                       pairs: int | None = None, injective: bool = False) -> tuple[int, ...]:
    """Distinct plaintexts that pin down ``key`` uniquely.

    Starts at ``r = min_unicity_pairs(k, n)`` (or ``pairs``) and moves to
    ``r+1 .. r+3`` when ``max_attempts`` tuples of the current size all fail.
    The first tuple tried at each size is ``(0, 1, ..., r-1)``.

    With ``injective=True`` the tuple must separate every pair of keys, which
    is what makes ``x -> {E_x(m), E_{x^s}(m)}`` exactly 2-to-1 for every
    ``s``; unicity of ``key`` alone only rules out collisions involving it.
    """
    c = _cipher(cipher)
    p = c.params
    check_desk_scale(p.key_bits)
    k = _as_int(key, p.key_bits, "key")
    rng = np.random.default_rng(rng)
    r0 = pairs if pairs is not None else min_unicity_pairs(p.key_bits, p.block_bits)
    if r0 < 1:
        raise ValueError(f"pairs must be >= 1, got {r0}")
    best = None
    attempts = 0
    for r in range(r0, r0 + 4):
        if r > (1 << p.block_bits):
            break
        for attempt in range(max_attempts):
            if attempt == 0:
                m = tuple(range(r))
            else:
                m = tuple(int(v) for v in rng.choice(1 << p.block_bits, size=r, replace=False))
            attempts += 1
            table = c.tuple_table(m)
            collisions = _collisions_with(table, k)
            if collisions == 0 and injective:
                collisions = _shared_rows(table, p.block_bits)
            if collisions == 0:
                return m
            best = collisions if best is None else min(best, collisions)
    raise UnicityError(
        f"no unicity tuple found after {attempts} attempts (fewest colliding keys: {best})",
        collisions=best if best is not None else -1, attempts=attempts)
