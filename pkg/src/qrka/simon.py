"""Simon's algorithm: Fourier sampling of a period-``s`` function and GF(2) recovery.

The state after measuring the function register is an equal superposition
over one coset ``{x0, x0 ^ s}``.  Applying Hadamards to it gives each ``y``
amplitude ``(-1)^{x0.y} (1 + (-1)^{s.y}) / sqrt(2^{k+1})``, i.e. probability
``2^{-(k-1)}`` on ``s``-perpendicular ``y`` and zero elsewhere.
:func:`sample_statevector` samples that distribution exactly, with the coset
partner found by looking up ``f`` rather than by using ``s``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from qrka.fs import FullDomainTable
from qrka.gf2 import BitMatrix, BitVec, add_if_independent, kernel_basis, parity


class PromiseViolation(RuntimeError):
    pass


class RecoveryFailure(RuntimeError):
    def __init__(self, message: str, stats: AttackStats):
        super().__init__(message)
        self.stats = stats


@dataclass
class AttackStats:
    samples_drawn: int = 0
    superposition_queries: int = 0
    classical_queries: int = 0
    rank_trajectory: list[tuple[int, int]] = field(default_factory=list)
    wall_time: float = 0.0
    # split of wall_time: evaluating f (t_f) vs. the GF(2) solve (g)
    sampling_time: float = 0.0
    solve_time: float = 0.0


def _rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def _uniform_bits(rng: np.random.Generator, k: int) -> int:
    return int.from_bytes(rng.bytes((k + 7) // 8), "little") & ((1 << k) - 1)


def sample_statevector(table: FullDomainTable, rng=None) -> BitVec:
    """One Fourier-sampling measurement ``y`` of ``f`` given by ``table``."""
    rng = _rng(rng)
    k = table.key_bits
    x0 = _uniform_bits(rng, k)
    coset = table.preimage(x0)
    if len(coset) != 2:
        raise PromiseViolation(f"f is not 2-to-1: input {x0} has {len(coset)} preimage(s)")
    x1 = int(coset[0]) if int(coset[0]) != x0 else int(coset[1])
    d = x0 ^ x1
    while True:
        y = _uniform_bits(rng, k)
        if not parity(y & d):
            return BitVec(y, k)


def sample_coset_analytic(s: BitVec, rng=None) -> BitVec:
    """Uniform draw from ``s``-perp, built from a basis of it (needs ``s`` itself)."""
    if not s:
        raise ValueError("s must be nonzero")
    rng = _rng(rng)
    basis = kernel_basis(BitMatrix(s.width, (s.value,)))
    coeffs = _uniform_bits(rng, len(basis)) if basis else 0
    y = 0
    for i, b in enumerate(basis):
        if (coeffs >> i) & 1:
            y ^= b.value
    return BitVec(y, s.width)


def _walsh_hadamard(a: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform along the last axis of a 2-D array."""
    rows, n = a.shape
    a = a.astype(np.float64)
    h = 1
    while h < n:
        a = a.reshape(rows, n // (2 * h), 2, h)
        a = np.stack([a[:, :, 0] + a[:, :, 1], a[:, :, 0] - a[:, :, 1]], axis=2)
        h *= 2
    return a.reshape(rows, n)


def fourier_sampling_distribution(table: FullDomainTable) -> np.ndarray:
    """Exact output distribution of the Fourier-sampling circuit from amplitudes.

    Sums, over every measured value of the function register, the squared
    Hadamard-transformed amplitudes of the collapsed input register.  Dense in
    ``2^k``; intended for ``k <= 12``.
    """
    k = table.key_bits
    n = 1 << k
    _, labels = np.unique(table.encodings, axis=0, return_inverse=True)
    labels = labels.reshape(-1)
    indicator = np.zeros((labels.max() + 1, n))
    indicator[labels, np.arange(n)] = 1.0
    spectrum = _walsh_hadamard(indicator)
    return (spectrum ** 2).sum(axis=0) / float(n * n)


def expected_samples_to_rank(k: int) -> float:
    """Mean number of uniform draws from a ``(k-1)``-dim space needed to span it."""
    return sum(1.0 / (1.0 - 2.0 ** (i - (k - 1))) for i in range(k - 1))


def recover_period(sampler: Callable[[], BitVec], k: int,
                   max_samples: int | None = None) -> tuple[BitVec, AttackStats]:
    """Collect samples until they span a ``(k-1)``-dim space, then solve for ``s``.

    Raises :class:`RecoveryFailure` (carrying the stats) when ``max_samples``
    run out first; it never guesses among several kernel vectors.
    """
    if max_samples is None:
        max_samples = 4 * k
    stats = AttackStats()
    start = time.perf_counter()
    m = BitMatrix(k)
    while m.rank < k - 1:
        if stats.samples_drawn >= max_samples:
            stats.wall_time = time.perf_counter() - start
            raise RecoveryFailure(
                f"rank {m.rank} < {k - 1} after {stats.samples_drawn} samples", stats)
        t0 = time.perf_counter()
        y = sampler()
        t1 = time.perf_counter()
        stats.samples_drawn += 1
        m, _ = add_if_independent(m, y)
        stats.solve_time += time.perf_counter() - t1
        stats.sampling_time += t1 - t0
        stats.rank_trajectory.append((stats.samples_drawn, m.rank))
    t1 = time.perf_counter()
    basis = kernel_basis(m)
    stats.solve_time += time.perf_counter() - t1
    stats.wall_time = time.perf_counter() - start
    assert len(basis) == 1, "rank-nullity: kernel of a rank k-1 matrix is one-dimensional"
    return basis[0], stats
