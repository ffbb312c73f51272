#!/usr/bin/env python3
"""Sweep attack campaigns over key sizes and print one summary row per size.

    python scripts/run_campaign.py --sizes 8 12 16 --trials 100 --seed 1 --out sweep.json
"""
import argparse
import json
import time

from qrka.attack import AttackConfig, run_campaign
from qrka.cipher import CipherParams
from qrka.cli import build_report
from qrka.simon import expected_samples_to_rank


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 12, 16])
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--rounds", type=int, default=6)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--backend", default="statevector")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    reports = []
    print(f"{'k':>3} {'ok':>5} {'mean y':>7} {'E[y]':>7} {'max y':>6} {'ms/trial':>9}")
    for k in args.sizes:
        cfg = AttackConfig(CipherParams(k, k, args.rounds), seed=args.seed, trials=args.trials,
                           backend=args.backend)
        t0 = time.perf_counter()
        rep = run_campaign(cfg, jobs=args.jobs)
        ms = 1000 * (time.perf_counter() - t0) / args.trials
        agg = rep.aggregate
        print(f"{k:>3} {agg['successes']:>5} {agg['mean_samples']:>7.2f} "
              f"{expected_samples_to_rank(k):>7.2f} {agg['max_samples']:>6} {ms:>9.1f}")
        reports.append(build_report(rep))
    if args.out:
        with open(args.out, "w") as f:
            json.dump(reports, f, indent=2)


if __name__ == "__main__":
    main()
