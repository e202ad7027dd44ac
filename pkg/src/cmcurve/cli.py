"""Command-line front end.

Subcommands mirror the pipeline stages: forms, primes, hdmodp (one shard),
lift (shards to a polynomial mod n), count, construct, verify, and bench.
With --json every integer is emitted as a decimal string so consumers
never hit 64-bit overflow. Identical invocations with the same seed print
identical bytes; wall-clock timings only appear under --timings.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import classpoly, cm, crt, curves, primegen, quadforms
from .arith import task_rng
from .errors import DomainError

_ENV_CACHE = "CM_CACHE_DIR"


@dataclass
class Config:
    epsilon: float = 0.001
    jobs: int = 1
    cache_dir: Path | None = None
    seed: int = 0
    count_method: str = "auto"
    naive_cap: int = curves.NAIVE_COUNT_CAP

    def __post_init__(self):
        if not 0 < self.epsilon < 0.5:
            raise ValueError("epsilon must be in (0, 1/2)")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


def _config(args) -> Config:
    cache = getattr(args, "cache", None)
    env_cache = os.environ.get(_ENV_CACHE)
    if env_cache:
        cache = env_cache  # environment wins over the flag
    return Config(
        epsilon=getattr(args, "epsilon", 0.001),
        jobs=getattr(args, "jobs", 1),
        cache_dir=Path(cache) if cache else None,
        seed=getattr(args, "seed", 0),
        count_method=getattr(args, "method", "auto"),
        naive_cap=getattr(args, "naive_cap", curves.NAIVE_COUNT_CAP),
    )


def _emit(doc: dict, as_json: bool, out) -> None:
    if as_json:
        print(json.dumps(doc, separators=(",", ":")), file=out)
    else:
        for key, val in doc.items():
            if isinstance(val, list):
                val = " ".join(str(v) for v in val)
            print(f"{key}: {val}", file=out)


def _s(v) -> str:
    return str(v)


def _cmd_forms(args, out) -> int:
    disc = quadforms.discriminant(args.D)
    forms = quadforms.reduced_forms(disc)
    doc = {
        "D": _s(disc.D),
        "h": _s(disc.h),
        "forms": [[_s(f.a), _s(f.b), _s(f.c)] for f in forms],
        "sum_inv_a": float(quadforms.sum_inverse_a(disc)),
        "log_B": disc.log_B,
    }
    if args.json:
        print(json.dumps(doc, separators=(",", ":")), file=out)
    else:
        print(f"D: {disc.D}  h: {disc.h}  log B: {disc.log_B:.4f}", file=out)
        print(f"sum 1/a: {float(quadforms.sum_inverse_a(disc)):.6f}", file=out)
        for f in forms:
            print(f"  ({f.a}, {f.b}, {f.c})", file=out)
    return 0


def _cmd_primes(args, out) -> int:
    disc = quadforms.discriminant(args.D)
    ps = primegen.find_crt_primes(disc, epsilon=args.epsilon)
    stats = primegen.prime_stats(ps)
    doc = {
        "D": _s(disc.D),
        "count": _s(stats.count),
        "target_log": ps.target_log,
        "log_product": ps.log_product,
        "max_p": _s(stats.max_p),
        "count_times_logd_over_logB": stats.count_times_logd_over_logB,
        "max_p_over_logB_sq": stats.max_p_over_logB_sq,
        "primes": [[_s(cp.p), _s(cp.t)] for cp in ps.primes],
    }
    if args.json:
        print(json.dumps(doc, separators=(",", ":")), file=out)
    else:
        print(
            f"D: {disc.D}  primes: {stats.count}  target log: {ps.target_log:.3f}"
            f"  log product: {ps.log_product:.3f}",
            file=out,
        )
        print(
            f"ratios: |S| log d / log B = {stats.count_times_logd_over_logB:.3f},"
            f" max p / (log B)^2 = {stats.max_p_over_logB_sq:.3f}",
            file=out,
        )
        for cp in ps.primes:
            print(f"  p = {cp.p}  t = {cp.t}", file=out)
    return 0


def _find_crt_prime(disc, p: int) -> primegen.CrtPrime:
    t2 = 4 * p - disc.d
    from .arith import isqrt

    t = isqrt(t2) if t2 > 0 else -1
    if t <= 0 or t * t != t2:
        raise ValueError(f"4*{p} - {disc.d} is not a positive square")
    return primegen.CrtPrime(p=p, t=t)


def _cmd_hdmodp(args, out) -> int:
    cfg = _config(args)
    disc = quadforms.discriminant(args.D)
    cp = _find_crt_prime(disc, args.p)
    shards = classpoly.build_shards(
        disc, [cp], jobs=cfg.jobs, cache_dir=cfg.cache_dir,
        seed=cfg.seed, method=cfg.count_method, naive_cap=cfg.naive_cap,
    )
    shard = shards[0]
    if args.json:
        out.write(classpoly.shard_to_json(shard))
    else:
        print(f"D: {shard.D}  p: {shard.p}  t: {shard.t}  h: {shard.h}", file=out)
        print(f"j: {' '.join(str(j) for j in shard.j_set)}", file=out)
        print(f"coeffs (low to high): {' '.join(str(c) for c in shard.poly.coeffs)}", file=out)
    return 0


def _load_shard_dir(path: Path) -> list[classpoly.Shard]:
    files = sorted(path.rglob("p*.json"))
    if not files:
        raise ValueError(f"no shard files under {path}")
    shards = [classpoly.load_shard(f) for f in files]
    Ds = {s.D for s in shards}
    if len(Ds) != 1:
        raise ValueError(f"shard directory mixes discriminants: {sorted(Ds)}")
    hs = {s.h for s in shards}
    if len(hs) != 1:
        raise ValueError("shard directory mixes degrees")
    return sorted(shards, key=lambda s: s.p)


def _cmd_lift(args, out) -> int:
    if not args.integer and args.n is None:
        raise ValueError("lift needs -n unless --integer is given")
    shards = _load_shard_dir(Path(args.shards))
    h = shards[0].h
    moduli = [s.p for s in shards]
    if args.integer:
        ints = [
            crt.crt_integer(moduli, [s.poly.coeffs[i] for s in shards])
            for i in range(h)
        ]
        doc = {
            "D": _s(shards[0].D),
            "degree": _s(h),
            "coeffs_signed": [_s(v) for v in ints] + ["1"],
        }
    else:
        basis = crt.build_basis(moduli, args.n, args.epsilon)
        res = [
            crt.crt_mod_n(basis, [s.poly.coeffs[i] for s in shards])
            for i in range(h)
        ]
        doc = {
            "D": _s(shards[0].D),
            "n": _s(args.n),
            "degree": _s(h),
            "coeffs": [_s(v) for v in res] + ["1"],
        }
    _emit(doc, args.json, out)
    return 0


def _cmd_count(args, out) -> int:
    cfg = _config(args)
    E = curves.curve_from_j(args.j, args.p)
    if cfg.count_method == "bsgs":
        n_points = curves.point_count_bsgs(E, rng=task_rng(cfg.seed, "count", args.p))
    else:
        n_points = curves.point_count_naive(E, cap=cfg.naive_cap)
    doc = {
        "p": _s(args.p),
        "j": _s(E.j),
        "a4": _s(E.a4),
        "a6": _s(E.a6),
        "method": cfg.count_method,
        "points": _s(n_points),
    }
    _emit(doc, args.json, out)
    return 0


def _cmd_construct(args, out) -> int:
    cfg = _config(args)
    result = cm.construct_curve(
        args.n,
        args.N,
        epsilon=cfg.epsilon,
        jobs=cfg.jobs,
        seed=cfg.seed,
        cache_dir=cfg.cache_dir,
        method=cfg.count_method,
        naive_cap=cfg.naive_cap,
    )
    params = cm.derive_cm_params(args.n, args.N)
    doc = {
        "n": _s(args.n),
        "N": _s(args.N),
        "t": _s(params.t),
        "D": _s(params.disc.D),
        "h": _s(result.h),
        "j": _s(result.j),
        "a4": _s(result.curve.a4),
        "a6": _s(result.curve.a6),
        "primes_used": [_s(p) for p in result.primes_used],
    }
    if args.timings:
        doc["wall_times"] = {k: round(v, 6) for k, v in result.timings.items()}
    _emit(doc, args.json, out)
    return 0


def _cmd_verify(args, out) -> int:
    cfg = _config(args)
    E = curves.curve(args.n, args.a4, args.a6)
    ok = cm.verify_order(
        E, args.N, rng=task_rng(cfg.seed, "verify", args.n), naive_cap=cfg.naive_cap
    )
    doc = {
        "n": _s(args.n),
        "N": _s(args.N),
        "a4": _s(E.a4),
        "a6": _s(E.a6),
        "verified": ok,
    }
    _emit(doc, args.json, out)
    return 0 if ok else 1


def _cmd_bench(args, out) -> int:
    import time

    cfg = _config(args)
    stages = {}
    t0 = time.perf_counter()
    disc = quadforms.discriminant(args.D)
    stages["forms"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    ps = primegen.find_crt_primes(disc, epsilon=cfg.epsilon)
    stages["primes"] = time.perf_counter() - t0
    stats = primegen.prime_stats(ps)
    doc = {
        "D": _s(disc.D),
        "h": _s(disc.h),
        "log_B": disc.log_B,
        "prime_count": _s(stats.count),
        "max_p": _s(stats.max_p),
        "count_times_logd_over_logB": stats.count_times_logd_over_logB,
        "max_p_over_logB_sq": stats.max_p_over_logB_sq,
    }
    if args.n is not None:
        t0 = time.perf_counter()
        poly = cm.hilbert_mod_n(
            disc, args.n, epsilon=cfg.epsilon, jobs=cfg.jobs,
            cache_dir=cfg.cache_dir, seed=cfg.seed,
            method=cfg.count_method, naive_cap=cfg.naive_cap,
        )
        stages["shards_and_lift"] = time.perf_counter() - t0
        doc["n"] = _s(args.n)
        doc["coeffs"] = [_s(c) for c in poly.coeffs]
    doc["wall_times"] = {k: round(v, 6) for k, v in stages.items()}
    _emit(doc, args.json, out)
    return 0


def _add_common(sub, *, epsilon=False, jobs=False, seed=False, cache=False):
    if epsilon:
        sub.add_argument("--epsilon", type=float, default=0.001)
    if jobs:
        sub.add_argument("--jobs", type=int, default=1)
    if seed:
        sub.add_argument("--seed", type=int, default=0)
    if cache:
        sub.add_argument("--cache", type=str, default=None)
    sub.add_argument("--json", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmcurve",
        description="Construct elliptic curves over F_n with a prescribed point count.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("forms", help="reduced quadratic forms, h and log B")
    s.add_argument("-D", type=int, required=True)
    _add_common(s)
    s.set_defaults(func=_cmd_forms)

    s = subs.add_parser("primes", help="split primes 4p = t^2 + d")
    s.add_argument("-D", type=int, required=True)
    _add_common(s, epsilon=True)
    s.set_defaults(func=_cmd_primes)

    s = subs.add_parser("hdmodp", help="class polynomial shard at one prime")
    s.add_argument("-D", type=int, required=True)
    s.add_argument("-p", type=int, required=True)
    _add_common(s, jobs=True, seed=True, cache=True)
    s.set_defaults(func=_cmd_hdmodp)

    s = subs.add_parser("lift", help="combine shards into the polynomial mod n")
    s.add_argument("--shards", type=str, required=True)
    s.add_argument("-n", type=int)
    s.add_argument("--integer", action="store_true",
                   help="reconstruct signed integer coefficients instead")
    _add_common(s, epsilon=True)
    s.set_defaults(func=_cmd_lift)

    s = subs.add_parser("count", help="point count for the curve with a given j")
    s.add_argument("-p", type=int, required=True)
    s.add_argument("-j", type=int, required=True)
    s.add_argument("--method", choices=("naive", "bsgs"), default="naive")
    _add_common(s, seed=True)
    s.set_defaults(func=_cmd_count)

    s = subs.add_parser("construct", help="curve over F_n with exactly N points")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-N", type=int, required=True)
    s.add_argument("--timings", action="store_true")
    _add_common(s, epsilon=True, jobs=True, seed=True, cache=True)
    s.set_defaults(func=_cmd_construct)

    s = subs.add_parser("verify", help="check a curve has the claimed order")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-N", type=int, required=True)
    s.add_argument("--a4", type=int, required=True)
    s.add_argument("--a6", type=int, required=True)
    _add_common(s, seed=True)
    s.set_defaults(func=_cmd_verify)

    s = subs.add_parser("bench", help="stage timings and prime-search ratios")
    s.add_argument("-D", type=int, required=True)
    s.add_argument("-n", type=int, default=None)
    _add_common(s, epsilon=True, jobs=True, seed=True, cache=True)
    s.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (DomainError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
