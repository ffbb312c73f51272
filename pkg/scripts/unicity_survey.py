#!/usr/bin/env python3
"""How often does the estimated r = ceil(k/n) + 1 pin the key, and how often is the key map injective?"""
import argparse

import numpy as np

from qrka.cipher import (CipherParams, ToyCipher, count_colliding_keys, count_key_collisions,
                         min_unicity_pairs)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--shapes", nargs="+", default=["8x8", "12x12", "4x12", "16x8", "8x4", "16x16"])
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'k x n':>7} {'r':>3} {'key unique':>11} {'injective':>10}")
    for shape in args.shapes:
        k, n = map(int, shape.split("x"))
        cipher = ToyCipher(CipherParams(k, n))
        r = min_unicity_pairs(k, n)
        unique = injective = 0
        for _ in range(args.samples):
            m = tuple(int(v) for v in rng.choice(1 << n, r, replace=False))
            unique += count_colliding_keys(cipher, m, int(rng.integers(0, 1 << k))) == 0
            injective += count_key_collisions(cipher, m) == 0
        print(f"{shape:>7} {r:>3} {unique / args.samples:>11.0%} {injective / args.samples:>10.0%}")


if __name__ == "__main__":
    main()
