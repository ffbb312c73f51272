import numpy as np
import pytest

from qrka.attack import (AttackConfig, check_zero_key, query_targets, run_attack, run_campaign,
                         trial_seeds)
from qrka.cipher import CipherParams, NotDeskScale, ToyCipher, find_unicity_tuple
from qrka.oracle import RelatedKeyOracle


def test_check_zero_key_true_for_zero_key():
    cipher = ToyCipher(CipherParams(8, 8))
    oracle, _ = RelatedKeyOracle.create(cipher, key=0)
    m = find_unicity_tuple(cipher, 0, rng=0)
    assert check_zero_key(m, cipher, oracle)
    assert oracle.classical_query_count == len(m)


def test_check_zero_key_exhaustive_no_false_positive():
    cipher = ToyCipher(CipherParams(8, 8))
    rng = np.random.default_rng(0)
    for key in range(1, 256):
        oracle, _ = RelatedKeyOracle.create(cipher, key=key)
        m = find_unicity_tuple(cipher, key, rng=rng)
        assert not check_zero_key(m, cipher, oracle)
        targets = query_targets(m, oracle)
        assert not check_zero_key(m, cipher, oracle, targets=targets)
        assert oracle.classical_query_count == 2 * len(m)


def test_forced_zero_key_succeeds_at_step_one():
    out = run_attack(AttackConfig(CipherParams(12, 12), seed=3), force_key=0)
    assert out.success and out.zero_key
    assert out.recovered_key.value == 0
    assert out.stats.superposition_queries == 0 and out.stats.samples_drawn == 0
    assert out.stats.classical_queries == out.pairs


@pytest.mark.parametrize("k, n", [(8, 8), (12, 12), (4, 12), (16, 8), (8, 4)])
def test_single_attack(k, n):
    out = run_attack(AttackConfig(CipherParams(k, n), seed=k * 100 + n))
    assert out.success, out.failure
    assert out.stats.superposition_queries == out.stats.samples_drawn <= 4 * k
    assert out.decrypt_queries == 0


def test_analytic_backend():
    out = run_attack(AttackConfig(CipherParams(12, 12), seed=9, backend="analytic"))
    assert out.success
    assert out.stats.superposition_queries == 0


def test_recovery_failure_reported():
    out = run_attack(AttackConfig(CipherParams(12, 12), seed=1, max_samples=3))
    assert not out.success and out.recovered_key is None
    assert "rank" in out.failure
    assert out.stats.samples_drawn == 3


def test_campaign_deterministic_and_order_independent():
    cfg = AttackConfig(CipherParams(8, 8), seed=77, trials=12)
    a = run_campaign(cfg)
    b = run_campaign(cfg)
    strip = lambda rep: [(o.recovered_key, o.stats.samples_drawn, o.stats.superposition_queries)
                         for o in rep.outcomes]
    assert strip(a) == strip(b)
    assert a.seeds == trial_seeds(77, 12)
    assert len(set(a.seeds)) == 12
    assert a.aggregate["successes"] == 12


def test_campaign_parallel_matches_serial():
    cfg = AttackConfig(CipherParams(8, 8), seed=5, trials=6)
    serial = run_campaign(cfg)
    parallel = run_campaign(cfg, jobs=2)
    assert [o.recovered_key for o in serial.outcomes] == [o.recovered_key for o in parallel.outcomes]


def test_config_validation():
    with pytest.raises(NotDeskScale):
        AttackConfig(CipherParams(24, 12))
    with pytest.raises(ValueError):
        AttackConfig(CipherParams(8, 8), backend="qpu")
    assert AttackConfig(CipherParams(12, 12)).sample_budget == 48
