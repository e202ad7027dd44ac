"""End-to-end construction of a curve over F_n with a prescribed order.

Given a prime n and a target N inside the Hasse interval, the trace is
t = n + 1 - N and the discriminant D = t^2 - 4n. The class polynomial for D
is assembled modulo n from its reductions at small split primes, a root j
is extracted, and the curve with that j-invariant (or its quadratic twist)
is the answer.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .arith import is_prime, task_rng
from .classpoly import PolyModM, build_shards
from .crt import build_basis, crt_mod_n
from .curves import (
    NAIVE_COUNT_CAP,
    CurveModP,
    OrderVerdict,
    curve,
    curve_from_j,
    hasse_interval,
    order_filter,
    point_count_bsgs,
    point_count_naive,
    quadratic_twist,
    random_point,
    scalar_mul,
    smallest_nonresidue,
)
from .errors import Ambiguous, NoRoot, OutsideHasse, ZeroTrace
from .primegen import DEFAULT_EPSILON, find_crt_primes
from .quadforms import Discriminant, discriminant


@dataclass(frozen=True)
class CmParams:
    n: int
    N: int
    t: int
    disc: Discriminant


@dataclass
class CurveResult:
    curve: CurveModP
    j: int
    order: int
    h: int
    primes_used: tuple[int, ...]
    timings: dict = field(default_factory=dict)


def derive_cm_params(n: int, N: int) -> CmParams:
    """Validate (n, N) and derive the trace and fundamental discriminant."""
    if n <= 3 or not is_prime(n):
        raise ValueError("n must be a prime greater than 3")
    if N < 0:
        raise OutsideHasse("target order must be nonnegative")
    lo, hi = hasse_interval(n)
    if not lo <= N <= hi:
        raise OutsideHasse(f"N = {N} outside [{lo}, {hi}] for n = {n}")
    t = n + 1 - N
    if t == 0:
        raise ZeroTrace("N = n + 1 needs a supersingular curve, unsupported")
    disc = discriminant(t * t - 4 * n)
    assert (6 * disc.d) % n != 0, "n ramifies; impossible for t != 0"
    return CmParams(n=n, N=N, t=t, disc=disc)


def hilbert_mod_n(
    disc: Discriminant,
    n: int,
    *,
    epsilon: float = DEFAULT_EPSILON,
    jobs: int = 1,
    cache_dir=None,
    seed=0,
    method: str = "auto",
    naive_cap: int = NAIVE_COUNT_CAP,
) -> PolyModM:
    """The class polynomial for disc reduced mod n, degree h, monic.

    d = 3 and d = 4 short-circuit to X and X - 1728 (j = 0 and j = 1728).
    Everything else goes through shards at split primes and the modular
    CRT lift, one coefficient at a time.
    """
    if disc.d == 3:
        return PolyModM(modulus=n, coeffs=(0, 1))
    if disc.d == 4:
        return PolyModM(modulus=n, coeffs=((-1728) % n, 1))
    prime_set = find_crt_primes(disc, epsilon=epsilon)
    shards = build_shards(
        disc,
        prime_set.primes,
        jobs=jobs,
        cache_dir=cache_dir,
        seed=seed,
        method=method,
        naive_cap=naive_cap,
    )
    basis = build_basis([s.p for s in shards], n, epsilon)
    coeffs = [
        crt_mod_n(basis, [s.poly.coeffs[i] for s in shards])
        for i in range(disc.h)
    ]
    coeffs.append(1)
    return PolyModM(modulus=n, coeffs=tuple(coeffs))


# ---------------------------------------------------------------------------
# Root finding over F_n
# ---------------------------------------------------------------------------
# Dense coefficient lists, lowest degree first, trimmed of leading zeros.


def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, b, n):
    a = list(a)
    db, lead_inv = len(b) - 1, pow(b[-1], -1, n)
    while len(a) - 1 >= db and a:
        q = a[-1] * lead_inv % n
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - q * c) % n
        _ptrim(a)
    return a


def _pmulmod(a, b, mod, n):
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for k, cb in enumerate(b):
                out[i + k] = (out[i + k] + ca * cb) % n
    return _pmod(_ptrim(out), mod, n)


def _pgcd(a, b, n):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, n)
    if a:
        inv = pow(a[-1], -1, n)
        a = [c * inv % n for c in a]
    return a


def _ppow_mod(base, e, mod, n):
    result = [1]
    base = _pmod(list(base), mod, n)
    while e:
        if e & 1:
            result = _pmulmod(result, base, mod, n)
        e >>= 1
        if e:
            base = _pmulmod(base, base, mod, n)
    return result


def _split_roots(g, n, rng) -> list[int]:
    """Roots of a monic product of distinct linear factors mod n."""
    deg = len(g) - 1
    if deg == 0:
        return []
    if deg == 1:
        return [(-g[0]) % n]
    while True:
        c = rng.randrange(n)
        w = _ppow_mod([c, 1], (n - 1) // 2, g, n)
        if not w:
            w = [0]
        w[0] = (w[0] - 1) % n
        h1 = _pgcd(w, g, n)
        if 0 < len(h1) - 1 < deg:
            break
    other = _pdiv_exact(g, h1, n)
    return _split_roots(h1, n, rng) + _split_roots(other, n, rng)


def _psub(a, b, n):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % n
    return _ptrim(out)


def _pdiv_exact(a, b, n):
    """Quotient a / b when b divides a exactly."""
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    lead_inv = pow(b[-1], -1, n)
    while len(a) >= len(b) and a:
        coef = a[-1] * lead_inv % n
        shift = len(a) - len(b)
        q[shift] = coef
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * c) % n
        _ptrim(a)
    assert not a, "division was not exact"
    return q


def find_all_roots(poly: PolyModM, n: int, seed=0) -> list[int]:
    """All roots in F_n of a nonzero polynomial, sorted ascending.

    gcd(X^n - X, f) isolates the distinct roots; random shifts (X + c)
    raised to (n-1)/2 then split that product of linear factors. The shift
    sequence comes from the seed, so results are reproducible.
    """
    if poly.modulus != n:
        raise ValueError("polynomial modulus does not match n")
    if n < 3 or n % 2 == 0:
        raise ValueError("root finding needs an odd prime modulus")
    if not poly.coeffs:
        raise ValueError("zero polynomial has every residue as a root")
    f = _ptrim(list(poly.coeffs))
    if len(f) == 1:
        return []
    xq = _ppow_mod([0, 1], n, f, n)
    g = _pgcd(_psub(xq, [0, 1], n), f, n)
    if len(g) <= 1:
        return []
    roots = _split_roots(g, n, task_rng(seed, "roots", n))
    roots.sort()
    assert all(poly.evaluate(r) == 0 for r in roots)
    return roots


def find_root_mod_n(poly: PolyModM, n: int, seed=0) -> int:
    """Smallest root of poly mod n; raises NoRoot when there is none."""
    roots = find_all_roots(poly, n, seed)
    if not roots:
        raise NoRoot(f"polynomial has no root mod {n}")
    return roots[0]


# ---------------------------------------------------------------------------
# Curve construction and verification
# ---------------------------------------------------------------------------


def verify_order(
    E: CurveModP,
    N: int,
    *,
    samples: int = 16,
    rng: random.Random | None = None,
    naive_cap: int = NAIVE_COUNT_CAP,
) -> bool:
    """Check #E(F_p) = N.

    Random points must all be annihilated by N while the complementary
    candidate N' = 2p + 2 - N fails on at least one of them; for fields
    small enough to count exhaustively the exact count decides.
    """
    p = E.p
    lo, hi = hasse_interval(p)
    if not lo <= N <= hi:
        raise ValueError("order to verify must lie in the Hasse interval")
    if rng is None:
        rng = random.Random(0)
    if p <= naive_cap:
        exact = point_count_naive(E, cap=naive_cap)
        if exact != N:
            return False
        P = random_point(E, rng)
        while P is None:  # unreachable; random_point returns affine points
            P = random_point(E, rng)
        assert scalar_mul(E, P, N) is None
        return True
    other = 2 * p + 2 - N
    other_ruled_out = other == N
    for _ in range(samples):
        P = random_point(E, rng)
        while P is None:
            P = random_point(E, rng)
        if scalar_mul(E, P, N) is not None:
            return False
        if not other_ruled_out and scalar_mul(E, P, other) is not None:
            other_ruled_out = True
    return other_ruled_out


def _exact_order(E: CurveModP, naive_cap: int, rng) -> int:
    if E.p <= naive_cap:
        return point_count_naive(E, cap=naive_cap)
    return point_count_bsgs(E, rng=rng)


def _special_j_curve(
    n: int, N: int, j: int, seed, naive_cap: int
) -> CurveModP:
    """Scan twists of the j = 0 / j = 1728 models for the order N.

    y^2 = x^3 + b covers the six sextic twist classes as b varies, and
    y^2 = x^3 + ax the four quartic ones; small coefficients hit every
    class quickly.
    """
    rng = task_rng(seed, "special", n, N)
    for coef in range(1, 200):
        E = (
            curve(n, 0, coef) if j == 0 else curve(n, coef, 0)
        )
        if verify_order(E, N, rng=rng, naive_cap=naive_cap):
            return E
    raise Ambiguous(f"no twist with {N} points found among small coefficients")


def construct_curve(
    n: int,
    N: int,
    *,
    epsilon: float = DEFAULT_EPSILON,
    jobs: int = 1,
    seed=0,
    cache_dir=None,
    method: str = "auto",
    naive_cap: int = NAIVE_COUNT_CAP,
    force_j: int | None = None,
) -> CurveResult:
    """A verified curve over F_n with exactly N points.

    The root of the class polynomial is the smallest one unless force_j
    picks another; the branch between the curve and its quadratic twist is
    decided by random-point annihilation and backstopped by an exact count.
    """
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    params = derive_cm_params(n, N)
    disc = params.disc
    timings["derive"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    prime_set = None
    if disc.d > 4:
        prime_set = find_crt_primes(disc, epsilon=epsilon)
    timings["primes"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if disc.d <= 4:
        j = 0 if disc.d == 3 else 1728 % n
        if force_j is not None and force_j % n != j:
            raise ValueError("force_j is not a root of the class polynomial")
        timings["hilbert"] = time.perf_counter() - t0
        t0 = time.perf_counter()
        E = _special_j_curve(n, N, j, seed, naive_cap)
        timings["construct"] = time.perf_counter() - t0
        return CurveResult(
            curve=E, j=j, order=N, h=disc.h, primes_used=(), timings=timings
        )

    shards = build_shards(
        disc, prime_set.primes, jobs=jobs, cache_dir=cache_dir,
        seed=seed, method=method, naive_cap=naive_cap,
    )
    basis = build_basis([s.p for s in shards], n, epsilon)
    coeffs = [
        crt_mod_n(basis, [s.poly.coeffs[i] for s in shards])
        for i in range(disc.h)
    ]
    poly = PolyModM(modulus=n, coeffs=tuple(coeffs + [1]))
    timings["hilbert"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if force_j is not None:
        j = force_j % n
        if poly.evaluate(j) != 0:
            raise ValueError("force_j is not a root of the class polynomial")
    else:
        j = find_root_mod_n(poly, n, seed)
    timings["root"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    E = curve_from_j(j, n)
    t_abs = abs(params.t)
    # E has N points iff its order sits on the branch the sign of t selects.
    wanted = (
        OrderVerdict.MATCHES_MINUS if params.t > 0 else OrderVerdict.MATCHES_PLUS
    )
    verdict = order_filter(E, t_abs, samples=16, rng=task_rng(seed, "branch", n))
    if verdict is OrderVerdict.INCONCLUSIVE:
        exact = _exact_order(E, naive_cap, task_rng(seed, "order", n))
        verdict = (
            wanted if exact == N else
            (OrderVerdict.MATCHES_PLUS if wanted is OrderVerdict.MATCHES_MINUS
             else OrderVerdict.MATCHES_MINUS)
        )
    if verdict is OrderVerdict.NEITHER:
        raise Ambiguous("class polynomial root produced a curve off both branches")
    if verdict is not wanted:
        E = quadratic_twist(E, smallest_nonresidue(n))
    if not verify_order(E, N, rng=task_rng(seed, "verify", n), naive_cap=naive_cap):
        raise Ambiguous("constructed curve failed order verification")
    timings["construct"] = time.perf_counter() - t0

    return CurveResult(
        curve=E,
        j=j,
        order=N,
        h=disc.h,
        primes_used=tuple(s.p for s in shards),
        timings=timings,
    )
