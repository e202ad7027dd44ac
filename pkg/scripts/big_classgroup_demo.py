#!/usr/bin/env python3
"""Exercise the class-number-96 discriminant D = -832603.

By default this prints the form/prime statistics and builds the single
largest shard (p = 1434707), which takes a few CPU-minutes. With
--full-lift it builds all 410 shards and lifts the class polynomial to
n = 100959557 (hours of CPU; use --cache to make the run resumable).

Usage: python scripts/big_classgroup_demo.py [--jobs K] [--cache DIR] [--full-lift]
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cmcurve import (  # noqa: E402
    build_shard,
    construct_curve,
    discriminant,
    find_crt_primes,
    point_count_bsgs,
    prime_stats,
)
from cmcurve.arith import task_rng  # noqa: E402
from cmcurve.curves import curve_from_j  # noqa: E402

D = -832603
N_TARGET = 100959557  # 4n = 20075^2 - D


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--cache", type=str, default=None)
    ap.add_argument("--full-lift", action="store_true")
    args = ap.parse_args()

    disc = discriminant(D)
    print(f"D = {D}: h = {disc.h}, log B = {disc.log_B:.2f}")

    prime_set = find_crt_primes(disc)
    stats = prime_stats(prime_set)
    print(f"{stats.count} primes, largest {stats.max_p}, "
          f"log product {prime_set.log_product:.2f}")
    print(f"ratios: |S| log d / log B = {stats.count_times_logd_over_logB:.3f}, "
          f"max p / (log B)^2 = {stats.max_p_over_logB_sq:.3f}")

    big = prime_set.primes[-1]
    print(f"\nbuilding the shard at p = {big.p} (t = {big.t}), jobs = {args.jobs}")
    t0 = time.perf_counter()
    shard = build_shard(disc, big, jobs=args.jobs, cache_dir=args.cache)
    print(f"done in {time.perf_counter() - t0:.1f}s; "
          f"first j = {shard.j_set[0]}, last j = {shard.j_set[-1]}")
    print(f"X^95 coefficient = {shard.poly.coeffs[95]}, "
          f"constant = {shard.poly.coeffs[0]}")

    check = curve_from_j(shard.j_set[0], big.p)
    print(f"order of the j = {shard.j_set[0]} curve: "
          f"{point_count_bsgs(check, rng=task_rng(0))}"
          f" (p+1-t = {big.p + 1 - big.t}, p+1+t = {big.p + 1 + big.t})")

    if not args.full_lift:
        print("\n--full-lift not set; stopping here.")
        return

    n = N_TARGET
    N = n + 1 + 20075
    print(f"\nfull pipeline: curve over F_{n} with {N} points "
          f"(all {stats.count} shards; this takes hours without a warm cache)")
    t0 = time.perf_counter()
    result = construct_curve(
        n, N, jobs=args.jobs, cache_dir=args.cache, seed=0
    )
    E = result.curve
    print(f"done in {time.perf_counter() - t0:.1f}s")
    print(f"curve: y^2 = x^3 + {E.a4}x + {E.a6} over F_{n} (j = {result.j})")


if __name__ == "__main__":
    main()
