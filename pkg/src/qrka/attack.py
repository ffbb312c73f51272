"""The two-step related-key attack: zero-key check, then Simon recovery of the key."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from qrka.cipher import (CipherParams, ToyCipher, UnicityError, check_desk_scale,
                         find_unicity_tuple)
from qrka.fs import UnicityViolation, evaluate_full_domain
from qrka.gf2 import BitVec
from qrka.oracle import Examiner, RelatedKeyOracle
from qrka.simon import (AttackStats, PromiseViolation, RecoveryFailure, recover_period,
                        sample_coset_analytic, sample_statevector)

BACKENDS = ("statevector", "analytic")


@dataclass(frozen=True)
class AttackConfig:
    params: CipherParams
    seed: int = 0
    max_samples: int | None = None
    trials: int = 1
    pairs: int | None = None
    backend: str = "statevector"
    unicity_attempts: int = 32

    def __post_init__(self):
        check_desk_scale(self.params.key_bits)
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def sample_budget(self) -> int:
        return self.max_samples if self.max_samples is not None else 4 * self.params.key_bits


@dataclass
class AttackOutcome:
    recovered_key: BitVec | None
    verified: bool
    stats: AttackStats
    failure: str | None = None
    # examiner verdict, K' == K
    exact: bool = False
    pairs: int = 0
    decrypt_queries: int = 0
    zero_key: bool = False

    @property
    def success(self) -> bool:
        return self.verified and self.exact


def query_targets(plaintexts: Sequence[int], oracle: RelatedKeyOracle) -> tuple[int, ...]:
    """The known ciphertexts ``E_K(m)``: one classical query per block at mask 0."""
    return tuple(oracle.related_encrypt(0, m) for m in plaintexts)


def check_zero_key(plaintexts: Sequence[int], cipher, oracle: RelatedKeyOracle,
                   targets: Sequence[int] | None = None) -> bool:
    """True iff ``E_0(m)`` matches the target ciphertexts, i.e. ``K == 0`` under unicity."""
    c = cipher if isinstance(cipher, ToyCipher) else ToyCipher(cipher)
    if targets is None:
        targets = query_targets(plaintexts, oracle)
    return c.encrypt_tuple(0, plaintexts) == tuple(targets)


def run_attack(config: AttackConfig, *, force_key: int | None = None,
               cipher: ToyCipher | None = None) -> AttackOutcome:
    """One trial: draw ``K``, set up the unicity pairs, and recover ``K`` from the oracle.

    ``force_key`` fixes the secret key (test hook).  The examiner is used only
    to build the unicity tuple (the environment's job), by the analytic
    backend, and for the final ``K' == K`` verdict.
    """
    start = time.perf_counter()
    p = config.params
    k = p.key_bits
    cipher = cipher or ToyCipher(p)
    rng = np.random.default_rng(config.seed)
    oracle, examiner = RelatedKeyOracle.create(cipher, key=force_key, rng=rng)
    plaintexts = find_unicity_tuple(cipher, examiner.secret_key, config.unicity_attempts,
                                    rng=rng, pairs=config.pairs, injective=True)

    targets = query_targets(plaintexts, oracle)
    if check_zero_key(plaintexts, cipher, oracle, targets=targets):
        stats = AttackStats(classical_queries=oracle.classical_query_count,
                            wall_time=time.perf_counter() - start)
        return _outcome(BitVec(0, k), plaintexts, targets, cipher, oracle, examiner, stats,
                        zero_key=True)

    if config.backend == "statevector":
        def sampler():
            return sample_statevector(evaluate_full_domain(plaintexts, cipher, oracle), rng)
    else:
        secret = examiner.secret_key

        def sampler():
            return sample_coset_analytic(secret, rng)

    try:
        candidate, stats = recover_period(sampler, k, config.sample_budget)
    except RecoveryFailure as exc:
        stats = exc.stats
        _fill_counts(stats, oracle, start)
        return AttackOutcome(None, False, stats, failure=str(exc), pairs=len(plaintexts),
                             decrypt_queries=oracle.decrypt_query_count)
    _fill_counts(stats, oracle, start)
    return _outcome(candidate, plaintexts, targets, cipher, oracle, examiner, stats)


def _fill_counts(stats: AttackStats, oracle: RelatedKeyOracle, start: float):
    stats.superposition_queries = oracle.superposition_query_count
    stats.classical_queries = oracle.classical_query_count
    stats.wall_time = time.perf_counter() - start


def _outcome(candidate: BitVec, plaintexts, targets, cipher: ToyCipher,
             oracle: RelatedKeyOracle, examiner: Examiner, stats: AttackStats,
             zero_key: bool = False) -> AttackOutcome:
    verified = cipher.encrypt_tuple(candidate.value, plaintexts) == tuple(targets)
    return AttackOutcome(
        recovered_key=candidate,
        verified=verified,
        stats=stats,
        failure=None if verified else "candidate does not reproduce the known ciphertexts",
        exact=examiner.is_key(candidate),
        pairs=len(plaintexts),
        decrypt_queries=oracle.decrypt_query_count,
        zero_key=zero_key,
    )


def trial_seeds(seed: int, trials: int) -> list[int]:
    """Independent 64-bit per-trial seeds derived from the campaign seed."""
    children = np.random.SeedSequence(seed).spawn(trials)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def _run_trial(config: AttackConfig) -> AttackOutcome:
    # setup failures and broken promises are reported per trial, never retried
    try:
        return run_attack(config)
    except (UnicityError, UnicityViolation, PromiseViolation) as exc:
        return AttackOutcome(None, False, AttackStats(), failure=f"{type(exc).__name__}: {exc}")


@dataclass
class CampaignReport:
    config: AttackConfig
    seeds: list[int]
    outcomes: list[AttackOutcome]
    aggregate: dict = field(default_factory=dict)


def run_campaign(config: AttackConfig, jobs: int = 1) -> CampaignReport:
    """Run ``config.trials`` independent trials with per-trial seeds; results keep trial order."""
    seeds = trial_seeds(config.seed, config.trials)
    configs = [replace(config, seed=s, trials=1) for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_trial, configs))
    else:
        outcomes = [_run_trial(c) for c in configs]
    return CampaignReport(config, seeds, outcomes, aggregate(outcomes))


def aggregate(outcomes: Sequence[AttackOutcome]) -> dict:
    samples = [o.stats.samples_drawn for o in outcomes]
    walls = [o.stats.wall_time for o in outcomes]
    n = len(outcomes)
    return {
        "trials": n,
        "successes": sum(o.success for o in outcomes),
        "success_rate": sum(o.success for o in outcomes) / n if n else 0.0,
        "mean_samples": float(np.mean(samples)) if n else 0.0,
        "max_samples": max(samples, default=0),
        "max_superposition_queries": max((o.stats.superposition_queries for o in outcomes), default=0),
        "total_decrypt_queries": sum(o.decrypt_queries for o in outcomes),
        "zero_key_trials": sum(o.zero_key for o in outcomes),
        "mean_wall_ms": 1000 * float(np.mean(walls)) if n else 0.0,
    }
