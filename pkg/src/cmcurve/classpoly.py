"""Per-prime class polynomial shards.

For a prime p with 4p = t^2 + d, exactly h of the j-invariants over F_p
belong to curves with p + 1 - t or p + 1 + t points. Scanning all j with a
one-point annihilation probe throws out almost everything cheaply; the few
survivors are re-checked with the multi-point filter and then an exact
count. The h roots found this way assemble into the monic shard polynomial
prod (X - j) mod p, which is what later gets lifted coefficient by
coefficient.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .arith import sqrt_mod_p, task_rng
from .curves import (
    NAIVE_COUNT_CAP,
    CurveModP,
    OrderVerdict,
    _mul_raw,
    order_filter,
    point_count_bsgs,
    point_count_naive,
    residue_table,
)
from .errors import WrongCount
from .primegen import CrtPrime
from .quadforms import Discriminant


@dataclass(frozen=True)
class PolyModM:
    """Polynomial with coefficients reduced mod `modulus`, lowest degree
    first; () is the zero polynomial."""

    modulus: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be >= 2")
        if any(not 0 <= c < self.modulus for c in self.coeffs):
            raise ValueError("coefficients must be reduced mod the modulus")
        if self.coeffs and self.coeffs[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.modulus
        return acc


@dataclass(frozen=True)
class Shard:
    """The per-prime artifact: j-invariants and their product polynomial."""

    D: int
    p: int
    t: int
    j_set: tuple[int, ...]
    poly: PolyModM

    @property
    def h(self) -> int:
        return len(self.j_set)


def poly_from_roots(roots, m: int) -> PolyModM:
    """Monic product of (X - r) mod m; the empty product is the constant 1."""
    coeffs = [1]
    for r in roots:
        if not 0 <= r < m:
            raise ValueError("roots must be reduced mod the modulus")
        neg = (-r) % m
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] = (nxt[i] + c * neg) % m
            nxt[i + 1] = (nxt[i + 1] + c) % m
        coeffs = nxt
    return PolyModM(modulus=m, coeffs=tuple(coeffs))


# ---------------------------------------------------------------------------
# j-invariant scan
# ---------------------------------------------------------------------------


def _exact_count(p: int, a4: int, a6: int, j: int, method: str, naive_cap: int, seed) -> int:
    E = CurveModP(p=p, a4=a4, a6=a6, j=j)
    if method == "naive" or (method == "auto" and p <= naive_cap):
        return point_count_naive(E, cap=max(naive_cap, p))
    return point_count_bsgs(E, rng=task_rng(seed, "count", p, j))


def _scan_range(
    p: int,
    t: int,
    lo: int,
    hi: int,
    seed,
    method: str,
    naive_cap: int,
    samples: int,
    prefilter: bool,
) -> list[int]:
    """Confirmed j-invariants in [lo, hi) whose curve order is p + 1 +- t."""
    tbl = residue_table(p)
    n_minus, n_plus = p + 1 - t, p + 1 + t
    sqrt_exp = (p + 1) // 4 if p % 4 == 3 else None
    special = 1728 % p
    out = []
    for j in range(max(lo, 1), hi):
        if j == special:
            continue
        k = j * pow((1728 - j) % p, -1, p) % p
        a4 = 3 * k % p
        a6 = 2 * k % p
        if prefilter:
            rng = task_rng(seed, p, j)
            while True:
                x = rng.randrange(p)
                rhs = (x * x % p * x + a4 * x + a6) % p
                if tbl[rhs]:
                    break
            if sqrt_exp is not None:
                y = pow(rhs, sqrt_exp, p)
            else:
                y = sqrt_mod_p(rhs, p)
            a = _mul_raw(p, a4, x, y, p + 1)
            b = _mul_raw(p, a4, x, y, t)
            if a is None or b is None:
                if a is not b:
                    continue  # annihilated by neither candidate
            elif a[0] != b[0]:
                continue
            E = CurveModP(p=p, a4=a4, a6=a6, j=j)
            verdict = order_filter(E, t, samples=samples, rng=task_rng(seed, "flt", p, j))
            if verdict is OrderVerdict.NEITHER:
                continue
        if _exact_count(p, a4, a6, j, method, naive_cap, seed) in (n_minus, n_plus):
            out.append(j)
    return out


def _scan_task(args):
    return _scan_range(*args)


def find_j_invariants(
    disc: Discriminant,
    cp: CrtPrime,
    *,
    method: str = "auto",
    naive_cap: int = NAIVE_COUNT_CAP,
    prefilter: bool = True,
    samples: int = 4,
    seed=0,
    jobs: int = 1,
) -> list[int]:
    """The h j-invariants over F_p whose curves have p + 1 +- t points.

    Every survivor of the probabilistic filter is confirmed with an exact
    count, so the result is exact; finding anything other than h of them
    raises WrongCount and aborts the run.
    """
    p, t = cp.p, cp.t
    if 4 * p != t * t + disc.d:
        raise ValueError(f"prime {p} with trace {t} does not match d = {disc.d}")
    if disc.d <= 4:
        raise ValueError("d <= 4 is handled by the special curve models")
    args = (seed, method, naive_cap, samples, prefilter)
    if jobs <= 1 or p < 1 << 16:
        found = _scan_range(p, t, 0, p, *args)
    else:
        chunks = max(jobs * 4, 1)
        bounds = [(p * i) // chunks for i in range(chunks + 1)]
        tasks = [
            (p, t, bounds[i], bounds[i + 1], *args) for i in range(chunks)
        ]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            found = [j for part in pool.map(_scan_task, tasks) for j in part]
    found.sort()
    if len(found) != disc.h:
        raise WrongCount(
            f"{len(found)} j-invariants survive for p = {p}, expected h = {disc.h}"
        )
    return found


def build_shard(
    disc: Discriminant,
    cp: CrtPrime,
    *,
    method: str = "auto",
    naive_cap: int = NAIVE_COUNT_CAP,
    prefilter: bool = True,
    samples: int = 4,
    seed=0,
    jobs: int = 1,
) -> Shard:
    js = find_j_invariants(
        disc,
        cp,
        method=method,
        naive_cap=naive_cap,
        prefilter=prefilter,
        samples=samples,
        seed=seed,
        jobs=jobs,
    )
    return Shard(
        D=disc.D,
        p=cp.p,
        t=cp.t,
        j_set=tuple(js),
        poly=poly_from_roots(js, cp.p),
    )


# ---------------------------------------------------------------------------
# Shard persistence
# ---------------------------------------------------------------------------


def shard_to_json(shard: Shard) -> str:
    """Canonical one-line JSON with every integer as a decimal string."""
    doc = {
        "D": str(shard.D),
        "p": str(shard.p),
        "t": str(shard.t),
        "h": str(shard.h),
        "j_set": [str(j) for j in shard.j_set],
        "coeffs": [str(c) for c in shard.poly.coeffs],
    }
    return json.dumps(doc, separators=(",", ":")) + "\n"


def shard_from_json(text: str) -> Shard:
    doc = json.loads(text)
    p = int(doc["p"])
    j_set = tuple(int(v) for v in doc["j_set"])
    shard = Shard(
        D=int(doc["D"]),
        p=p,
        t=int(doc["t"]),
        j_set=j_set,
        poly=PolyModM(modulus=p, coeffs=tuple(int(v) for v in doc["coeffs"])),
    )
    if len(j_set) != int(doc["h"]):
        raise ValueError("shard h field disagrees with its j_set")
    if shard.poly != poly_from_roots(j_set, p):
        raise ValueError("shard polynomial disagrees with its roots")
    return shard


def shard_path(cache_dir, D: int, p: int) -> Path:
    return Path(cache_dir) / f"D{-D}" / f"p{p}.json"


def save_shard(shard: Shard, cache_dir) -> Path:
    path = shard_path(cache_dir, shard.D, shard.p)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(shard_to_json(shard))
    os.replace(tmp, path)
    return path


def load_shard(path) -> Shard:
    return shard_from_json(Path(path).read_text())


def _shard_task(args):
    D, d, h, log_B, p, t, method, naive_cap, prefilter, samples, seed = args
    disc = Discriminant(D=D, d=d, h=h, log_B=log_B)
    return build_shard(
        disc,
        CrtPrime(p=p, t=t),
        method=method,
        naive_cap=naive_cap,
        prefilter=prefilter,
        samples=samples,
        seed=seed,
        jobs=1,
    )


def build_shards(
    disc: Discriminant,
    crt_primes,
    *,
    method: str = "auto",
    naive_cap: int = NAIVE_COUNT_CAP,
    prefilter: bool = True,
    samples: int = 4,
    seed=0,
    jobs: int = 1,
    cache_dir=None,
) -> list[Shard]:
    """Shards for every prime, cache-aware, optionally across a worker pool.

    Distinct primes are independent, so they are farmed out whole; the
    result is always ordered by p ascending regardless of scheduling.
    """
    todo = []
    have: dict[int, Shard] = {}
    for cp in crt_primes:
        if cache_dir is not None:
            path = shard_path(cache_dir, disc.D, cp.p)
            if path.exists():
                shard = load_shard(path)
                if (shard.D, shard.t) != (disc.D, cp.t):
                    raise ValueError(f"cached shard {path} does not match request")
                have[cp.p] = shard
                continue
        todo.append(cp)
    if todo:
        if jobs > 1 and len(todo) > 1:
            tasks = [
                (disc.D, disc.d, disc.h, disc.log_B, cp.p, cp.t,
                 method, naive_cap, prefilter, samples, seed)
                for cp in todo
            ]
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                built = list(pool.map(_shard_task, tasks))
        else:
            inner_jobs = jobs if len(todo) == 1 else 1
            built = [
                build_shard(
                    disc, cp, method=method, naive_cap=naive_cap,
                    prefilter=prefilter, samples=samples, seed=seed,
                    jobs=inner_jobs,
                )
                for cp in todo
            ]
        for shard in built:
            have[shard.p] = shard
            if cache_dir is not None:
                save_shard(shard, cache_dir)
    return [have[cp.p] for cp in sorted(crt_primes, key=lambda c: c.p)]
