"""Command-line front end: ``qrka {attack,verify-circuits,emit-netlist,unicity}``.

Exit codes: 0 success, 1 a trial or check failed, 2 usage / validation error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from qrka import revsim
from qrka.attack import BACKENDS, AttackConfig, run_campaign
from qrka.cipher import (DEFAULT_ROUNDS, MAX_DESK_KEY_BITS, CipherParams, ToyCipher,
                         count_colliding_keys, find_unicity_tuple, min_unicity_pairs,
                         UnicityError)

SCHEMA_VERSION = 1
CSV_FIELDS = ["trial", "seed", "success", "verified", "zero_key", "pairs", "samples",
              "superposition_queries", "classical_queries", "decrypt_queries",
              "recovered_key", "failure", "wall_ms"]


def _seed_default() -> int:
    env = os.environ.get("QRKA_SEED")
    return int(env, 0) if env else 0


def build_report(report) -> dict:
    cfg = report.config
    p = cfg.params
    rows = []
    for i, (seed, o) in enumerate(zip(report.seeds, report.outcomes)):
        rows.append({
            "trial": i,
            "seed": seed,
            "success": o.success,
            "verified": o.verified,
            "zero_key": o.zero_key,
            "pairs": o.pairs,
            "samples": o.stats.samples_drawn,
            "superposition_queries": o.stats.superposition_queries,
            "classical_queries": o.stats.classical_queries,
            "decrypt_queries": o.decrypt_queries,
            "recovered_key": None if o.recovered_key is None else format(o.recovered_key.value, "x"),
            "failure": o.failure,
            "wall_ms": round(1000 * o.stats.wall_time, 3),
        })
    return {
        "schema": SCHEMA_VERSION,
        "config": {
            "key_bits": p.key_bits,
            "block_bits": p.block_bits,
            "rounds": p.rounds,
            "pairs": cfg.pairs,
            "trials": cfg.trials,
            "seed": cfg.seed,
            "max_samples": cfg.sample_budget,
            "backend": cfg.backend,
        },
        "trials": rows,
        "aggregate": report.aggregate,
    }


def _write(text: str, out: str | None):
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def cmd_attack(args, parser) -> int:
    if args.key_bits > MAX_DESK_KEY_BITS:
        parser.error(f"--key-bits {args.key_bits} is not desk-scale (limit {MAX_DESK_KEY_BITS})")
    try:
        params = CipherParams(args.key_bits, args.block_bits, args.rounds)
        config = AttackConfig(params, seed=args.seed, max_samples=args.max_samples,
                              trials=args.trials, pairs=args.pairs, backend=args.backend)
    except ValueError as exc:
        parser.error(str(exc))
    report = build_report(run_campaign(config, jobs=args.jobs))
    if args.format == "json":
        text = json.dumps(report, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(report["trials"])
        text = buf.getvalue()
    _write(text, args.out)
    agg = report["aggregate"]
    return 0 if agg["successes"] == agg["trials"] else 1


def _check_comparator(n: int) -> bool:
    c = revsim.build_comparator(n)
    i, j = np.meshgrid(np.arange(1 << n, dtype=np.uint64), np.arange(1 << n, dtype=np.uint64))
    i, j = i.ravel(), j.ravel()
    out = revsim.run_many(c, c.pack_many(i=i, j=j))
    return bool(np.all(c.unpack(out, "out") == (i < j))
                and np.all(c.unpack(out, "i") == i) and np.all(c.unpack(out, "j") == j)
                and np.all(c.unpack(out, "scratch") == 0))


def _check_copy(n: int) -> bool:
    c = revsim.build_controlled_copy(n)
    for src in range(1 << n):
        for ctrl in (0, 1):
            s = revsim.run(c, c.pack(src=src, ctrl=ctrl))
            if c.unpack(s, "dst") != (src if ctrl else 0) or c.unpack(s, "src") != src:
                return False
    return True


def _check_minmax(w: int) -> bool:
    c = revsim.build_minmax_network(w)
    a, b = np.meshgrid(np.arange(1 << w, dtype=np.uint64), np.arange(1 << w, dtype=np.uint64))
    a, b = a.ravel(), b.ravel()
    out = revsim.run_many(c, c.pack_many(c=a, c_prime=b))
    return bool(np.all(c.unpack(out, "lo") == np.minimum(a, b))
                and np.all(c.unpack(out, "hi") == np.maximum(a, b))
                and np.all(c.unpack(out, "c") == a) and np.all(c.unpack(out, "c_prime") == b)
                and np.all(c.unpack(out, "cmp") == (a < b)) and np.all(c.unpack(out, "scratch") == 0))


CHECKS = {"comparator": _check_comparator, "copy": _check_copy, "minmax": _check_minmax}


def cmd_verify_circuits(args, parser) -> int:
    if args.max_width < 1:
        parser.error("--max-width must be >= 1")
    ok = True
    print(f"{'gadget':<11} {'n':>3} {'width':>5} {'NOT':>5} {'CNOT':>5} {'TOFF':>5} "
          f"{'total':>6} {'depth':>5}  exhaustive  bijective")
    for name, build in revsim.GADGETS.items():
        for n in range(1, args.max_width + 1):
            c = build(n)
            st = revsim.gate_stats(c)
            passed = CHECKS[name](n)
            bij = revsim.verify_reversible(c) if c.width <= revsim.MAX_EXHAUSTIVE_WIDTH else None
            ok &= passed and bij is not False
            cnt = st["counts"]
            print(f"{name:<11} {n:>3} {st['width']:>5} {cnt['NOT']:>5} {cnt['CNOT']:>5} "
                  f"{cnt['TOFFOLI']:>5} {st['total']:>6} {st['depth']:>5}  "
                  f"{'pass' if passed else 'FAIL':<10}  {'-' if bij is None else ('pass' if bij else 'FAIL')}")
    return 0 if ok else 1


def cmd_emit_netlist(args, parser) -> int:
    if args.width < 1:
        parser.error("--width must be >= 1")
    c = revsim.GADGETS[args.gadget](args.width)
    _write(revsim.to_netlist(c), args.out)
    return 0


def cmd_unicity(args, parser) -> int:
    k, n = args.key_bits, args.block_bits
    try:
        r = min_unicity_pairs(k, n)
    except ValueError as exc:
        parser.error(str(exc))
    print(f"estimate: r > ceil({k}/{n}) -> r = {r} pairs")
    if k > MAX_DESK_KEY_BITS:
        print(f"brute force: skipped, 2^{k} keys is not desk-scale")
        return 0
    try:
        cipher = ToyCipher(CipherParams(k, n, args.rounds))
    except ValueError as exc:
        parser.error(str(exc))
    rng = np.random.default_rng(args.seed)
    unique_at_r = 0
    retupled = 0
    failed = 0
    for _ in range(args.keys):
        key = int(rng.integers(0, 1 << k))
        m = tuple(int(v) for v in rng.choice(1 << n, size=min(r, 1 << n), replace=False))
        if count_colliding_keys(cipher, m, key) == 0:
            unique_at_r += 1
            continue
        try:
            find_unicity_tuple(cipher, key, rng=rng)
            retupled += 1
        except UnicityError:
            failed += 1
    print(f"brute force over {args.keys} random keys with random {r}-tuples: "
          f"{unique_at_r} unique, {retupled} needed re-tupling, {failed} failed")
    if unique_at_r < args.keys:
        print(f"estimate shortfall: {args.keys - unique_at_r} key(s) not pinned by the first {r}-tuple")
    return 0 if failed == 0 else 1


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qrka", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("attack", help="run a seeded attack campaign")
    a.add_argument("--key-bits", type=int, required=True)
    a.add_argument("--block-bits", type=int, required=True)
    a.add_argument("--rounds", type=int, default=DEFAULT_ROUNDS)
    a.add_argument("--pairs", type=int, default=None, help="override the number of plaintext pairs r")
    a.add_argument("--trials", type=int, default=1)
    a.add_argument("--seed", type=lambda s: int(s, 0), default=None,
                   help="64-bit campaign seed (default: $QRKA_SEED or 0)")
    a.add_argument("--max-samples", type=int, default=None)
    a.add_argument("--backend", choices=BACKENDS, default="statevector")
    a.add_argument("--out", default=None)
    a.add_argument("--format", choices=("json", "csv"), default="json")
    a.add_argument("--jobs", type=int, default=1)
    a.set_defaults(func=cmd_attack)

    v = sub.add_parser("verify-circuits", help="exhaustively check the reversible gadgets")
    v.add_argument("--max-width", type=int, default=5)
    v.set_defaults(func=cmd_verify_circuits)

    e = sub.add_parser("emit-netlist", help="write a gadget netlist")
    e.add_argument("--gadget", choices=sorted(revsim.GADGETS), required=True)
    e.add_argument("--width", type=int, required=True)
    e.add_argument("--out", default=None)
    e.set_defaults(func=cmd_emit_netlist)

    u = sub.add_parser("unicity", help="unicity estimate and brute-force check")
    u.add_argument("--key-bits", type=int, required=True)
    u.add_argument("--block-bits", type=int, required=True)
    u.add_argument("--rounds", type=int, default=DEFAULT_ROUNDS)
    u.add_argument("--keys", type=int, default=100)
    u.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    u.set_defaults(func=cmd_unicity)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", 0) is None:
        try:
            args.seed = _seed_default()
        except ValueError:
            parser.error("QRKA_SEED must be an integer")
    return args.func(args, parser)


if __name__ == "__main__":
    sys.exit(main())
