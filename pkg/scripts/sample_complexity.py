#!/usr/bin/env python3
"""Empirical samples-to-rank k-1 against the spanning expectation, per key size.

Uses the analytic sampler so large run counts stay cheap; the statevector
sampler is checked against it in the test suite.
"""
import argparse

import numpy as np

from qrka.gf2 import BitVec
from qrka.simon import expected_samples_to_rank, recover_period, sample_coset_analytic


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 12, 16, 20, 32])
    ap.add_argument("--runs", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'k':>3} {'mean':>8} {'expected':>9} {'rel.err':>8} {'p99':>5} {'<=4k':>7}")
    for k in args.sizes:
        counts = []
        for _ in range(args.runs):
            s = BitVec(int(rng.integers(1, 1 << k)), k)
            _, st = recover_period(lambda: sample_coset_analytic(s, rng), k, max_samples=100 * k)
            counts.append(st.samples_drawn)
        counts = np.array(counts)
        exp = expected_samples_to_rank(k)
        print(f"{k:>3} {counts.mean():>8.3f} {exp:>9.3f} {(counts.mean() - exp) / exp:>+8.3%} "
              f"{int(np.percentile(counts, 99)):>5} {np.mean(counts <= 4 * k):>7.1%}")


if __name__ == "__main__":
    main()
