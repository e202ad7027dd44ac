"""Search for small primes p with 4p = t^2 + d.

Each such prime splits into principal ideals in Q(sqrt(-d)), which is what
makes the per-prime class polynomial recoverable from point counts alone.
The search walks t upward with the parity forced by 4 | t^2 + d and stops
once the product of the primes found exceeds the requested target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import is_prime
from .errors import NoPrimesPossible, SearchLimitExceeded
from .quadforms import Discriminant

DEFAULT_EPSILON = 0.001
_LOG_GUARD = 2.0 ** -30  # makes "product strictly exceeds target" robust


@dataclass(frozen=True)
class CrtPrime:
    """A prime p with its positive trace candidate t, 4p = t^2 + d."""

    p: int
    t: int


@dataclass(frozen=True)
class PrimeSet:
    disc: Discriminant
    primes: tuple[CrtPrime, ...]
    log_product: float
    target_log: float


@dataclass(frozen=True)
class PrimeStats:
    """Observed size/magnitude ratios of a prime set, for logging only."""

    count: int
    max_p: int
    count_times_logd_over_logB: float
    max_p_over_logB_sq: float


def default_target_log(disc: Discriminant, epsilon: float = DEFAULT_EPSILON) -> float:
    """log of the reconstruction threshold M = B / (1/2 - epsilon)."""
    if not 0 < epsilon < 0.5:
        raise ValueError("epsilon must be in (0, 1/2)")
    return disc.log_B - math.log(0.5 - epsilon)


def _default_t_cap(target_log: float) -> int:
    return 10 ** 6 * max(1, math.ceil(math.log(max(target_log, math.e))))


def find_crt_primes(
    disc: Discriminant,
    target_log: float | None = None,
    *,
    epsilon: float = DEFAULT_EPSILON,
    t_cap: int | None = None,
) -> PrimeSet:
    """Smallest-first primes of the form (t^2 + d)/4 whose product exceeds
    exp(target_log).

    At least one prime is always emitted, even for target_log = 0. Primes
    p <= 3 and primes dividing 6d are skipped (the curve model needs
    characteristic > 3 and an unramified prime; for t >= 1 no p > 3 can
    divide d anyway).
    """
    d = disc.d
    if d % 8 == 7:
        raise NoPrimesPossible(
            f"d = {d} = 7 (mod 8): (t^2 + d)/4 is even whenever it is an integer"
        )
    if target_log is None:
        target_log = default_target_log(disc, epsilon)
    if target_log < 0:
        raise ValueError("target_log must be nonnegative")
    cap = t_cap if t_cap is not None else _default_t_cap(target_log)

    primes: list[CrtPrime] = []
    log_product = 0.0
    t = 1 if d % 2 else 2  # 4 | t^2 + d forces t odd iff d is odd
    while not primes or log_product < target_log + _LOG_GUARD:
        if t > cap:
            raise SearchLimitExceeded(
                f"no prime product above e^{target_log:.1f} with t <= {cap}"
            )
        p, rem = divmod(t * t + d, 4)
        if rem == 0 and p > 3 and d % p != 0 and is_prime(p):
            primes.append(CrtPrime(p=p, t=t))
            log_product += math.log(p)
        t += 2
    return PrimeSet(
        disc=disc,
        primes=tuple(primes),
        log_product=log_product,
        target_log=target_log,
    )


def prime_stats(prime_set: PrimeSet) -> PrimeStats:
    """Size and magnitude ratios of the set; reported, never asserted."""
    if not prime_set.primes:
        raise ValueError("prime set is empty")
    disc = prime_set.disc
    count = len(prime_set.primes)
    max_p = prime_set.primes[-1].p
    log_b = max(disc.log_B, 1e-9)
    return PrimeStats(
        count=count,
        max_p=max_p,
        count_times_logd_over_logB=count * math.log(disc.d) / log_b,
        max_p_over_logB_sq=max_p / log_b ** 2,
    )
