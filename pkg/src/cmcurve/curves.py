"""Short-Weierstrass elliptic curves over prime fields.

Curves are y^2 = x^3 + a4 x + a6 over F_p with p > 3. Points are either
None (the point at infinity) or affine (x, y) tuples. Everything here is a
pure function of its arguments; randomised operations take an explicit
random.Random so runs are reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .arith import isqrt, legendre, sqrt_mod_p
from .errors import Ambiguous, NotANonResidue, SpecialJ, TooLarge

Point = Optional[tuple[int, int]]

NAIVE_COUNT_CAP = 1 << 26


@dataclass(frozen=True)
class CurveModP:
    """y^2 = x^3 + a4 x + a6 over F_p, with the j-invariant cached."""

    p: int
    a4: int
    a6: int
    j: int

    def __post_init__(self):
        if self.p <= 3:
            raise ValueError("field characteristic must exceed 3")
        if (4 * self.a4 ** 3 + 27 * self.a6 ** 2) % self.p == 0:
            raise ValueError("singular curve")


class OrderVerdict(Enum):
    MATCHES_PLUS = "matches_plus"  # group order is p + 1 + t
    MATCHES_MINUS = "matches_minus"  # group order is p + 1 - t
    NEITHER = "neither"
    INCONCLUSIVE = "inconclusive"


def j_invariant(p: int, a4: int, a6: int) -> int:
    """j = 1728 * 4 a4^3 / (4 a4^3 + 27 a6^2) mod p."""
    num = 4 * pow(a4, 3, p) % p
    den = (num + 27 * pow(a6, 2, p)) % p
    if den == 0:
        raise ValueError("singular curve has no j-invariant")
    return 1728 * num * pow(den, -1, p) % p


def curve(p: int, a4: int, a6: int) -> CurveModP:
    """Build a curve from raw coefficients, computing its j-invariant."""
    a4 %= p
    a6 %= p
    return CurveModP(p=p, a4=a4, a6=a6, j=j_invariant(p, a4, a6))


def curve_from_j(j: int, p: int) -> CurveModP:
    """The model y^2 = x^3 + 3kx + 2k with k = j/(1728 - j).

    Raises SpecialJ for j = 0 or j = 1728 mod p, where k is zero or
    undefined; callers special-case those two j-invariants.
    """
    if p <= 3:
        raise ValueError("field characteristic must exceed 3")
    j %= p
    if j == 0 or j == 1728 % p:
        raise SpecialJ(f"j = {j} mod {p} needs a special curve model")
    k = j * pow((1728 - j) % p, -1, p) % p
    return CurveModP(p=p, a4=3 * k % p, a6=2 * k % p, j=j)


def is_on_curve(E: CurveModP, P: Point) -> bool:
    if P is None:
        return True
    x, y = P
    return (y * y - (x * x % E.p * x + E.a4 * x + E.a6)) % E.p == 0


def point_neg(E: CurveModP, P: Point) -> Point:
    if P is None:
        return None
    return (P[0], -P[1] % E.p)


def point_add(E: CurveModP, P: Point, Q: Point) -> Point:
    if P is None:
        return Q
    if Q is None:
        return P
    p = E.p
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + E.a4) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return (x3, (lam * (x1 - x3) - y1) % p)


def _mul_raw(p: int, a4: int, x: int, y: int, m: int) -> tuple[int, int] | None:
    """[m](x, y) by double-and-add on raw coordinates (hot path)."""
    rx = ry = None
    bx, by = x, y
    base_inf = False
    while m:
        if m & 1:
            if base_inf:
                pass
            elif rx is None:
                rx, ry = bx, by
            elif rx == bx:
                if (ry + by) % p == 0:
                    rx = ry = None
                else:
                    lam = (3 * bx * bx + a4) * pow(2 * by, -1, p) % p
                    x3 = (lam * lam - 2 * bx) % p
                    ry = (lam * (bx - x3) - by) % p
                    rx = x3
            else:
                lam = (by - ry) * pow(bx - rx, -1, p) % p
                x3 = (lam * lam - rx - bx) % p
                ry = (lam * (rx - x3) - ry) % p
                rx = x3
        m >>= 1
        if m and not base_inf:
            if by == 0:
                base_inf = True
            else:
                lam = (3 * bx * bx + a4) * pow(2 * by, -1, p) % p
                x3 = (lam * lam - 2 * bx) % p
                by = (lam * (bx - x3) - by) % p
                bx = x3
    return None if rx is None else (rx, ry)


def scalar_mul(E: CurveModP, P: Point, m: int) -> Point:
    """[m]P for m >= 0; [0]P is the point at infinity."""
    if m < 0:
        raise ValueError("scalar must be nonnegative")
    if P is None or m == 0:
        return None
    return _mul_raw(E.p, E.a4, P[0], P[1], m)


def random_point(E: CurveModP, rng: random.Random) -> Point:
    """A point with uniformly sampled x; y is the canonical smaller root."""
    p = E.p
    while True:
        x = rng.randrange(p)
        rhs = (x * x % p * x + E.a4 * x + E.a6) % p
        if legendre(rhs, p) != -1:
            return (x, sqrt_mod_p(rhs, p))


def smallest_nonresidue(p: int) -> int:
    c = 2
    while legendre(c, p) != -1:
        c += 1
    return c


def quadratic_twist(E: CurveModP, c: int) -> CurveModP:
    """The twist (a4 c^2, a6 c^3); same j, order 2p + 2 - #E."""
    p = E.p
    if legendre(c, p) != -1:
        raise NotANonResidue(f"{c} is a square mod {p}")
    return CurveModP(p=p, a4=E.a4 * c * c % p, a6=E.a6 * pow(c, 3, p) % p, j=E.j)


# ---------------------------------------------------------------------------
# Point counting
# ---------------------------------------------------------------------------

_TABLE_CACHE: dict[int, bytearray] = {}
_TABLE_CACHE_MAX = 3


def residue_table(p: int) -> bytearray:
    """Quadratic character table: entry v is chi(v) + 1, i.e. 0 for a
    non-residue, 1 for zero, 2 for a nonzero square. Cached per process."""
    tbl = _TABLE_CACHE.get(p)
    if tbl is None:
        tbl = bytearray(p)
        tbl[0] = 1
        for x in range(1, (p - 1) // 2 + 1):
            tbl[x * x % p] = 2
        if len(_TABLE_CACHE) >= _TABLE_CACHE_MAX:
            _TABLE_CACHE.pop(next(iter(_TABLE_CACHE)))
        _TABLE_CACHE[p] = tbl
    return tbl


def hasse_interval(p: int) -> tuple[int, int]:
    fl = isqrt(4 * p)
    return p + 1 - fl, p + 1 + fl


def point_count_naive(E: CurveModP, cap: int = NAIVE_COUNT_CAP) -> int:
    """#E(F_p) = p + 1 + sum over x of chi(x^3 + a4 x + a6).

    Exhaustive in x; refuses fields above `cap`.
    """
    p, a4, a6 = E.p, E.a4, E.a6
    if p > cap:
        raise TooLarge(f"p = {p} exceeds the exhaustive-count cap {cap}")
    tbl = residue_table(p)
    acc = 0
    for x in range(p):
        acc += tbl[(x * x % p * x + a4 * x + a6) % p]
    n = 1 + acc  # sum(chi + 1) over p values folds p into the constant
    lo, hi = hasse_interval(p)
    assert lo <= n <= hi, "point count escaped the Hasse interval"
    return n


def _annihilators_in_window(
    E: CurveModP, P: tuple[int, int], lo: int, width: int
) -> list[int]:
    """All m in [lo, lo + width) with [m]P = O, by baby-step giant-step."""
    p, a4 = E.p, E.a4
    step = isqrt(width) + 1
    baby: dict[tuple[int, int], int] = {}
    q: Point = None
    for jj in range(step):
        if q is None and jj > 0:
            # [jj]P = O, so ord(P) = jj: every multiple in the window works.
            first = lo + (-lo) % jj
            return list(range(first, lo + width, jj))
        if q is not None:
            baby[q] = jj
        q = (P if q is None else _add_points(p, a4, q, P))
    # find k in [0, width): [k]P = -[lo]P, k = i*step + jj
    target = _mul_raw(p, a4, P[0], P[1], lo)
    target = None if target is None else (target[0], -target[1] % p)
    giant = _mul_raw(p, a4, P[0], P[1], step)
    out = []
    cur = target
    for i in range(width // step + 2):
        if cur is None:
            if i * step < width:
                out.append(lo + i * step)
        else:
            jj = baby.get(cur)
            if jj is not None and i * step + jj < width:
                out.append(lo + i * step + jj)
        cur = _sub_point(p, a4, cur, giant)
    return sorted(out)


def _add_points(p, a4, P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + a4) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return (x3, (lam * (x1 - x3) - y1) % p)


def _sub_point(p, a4, P, Q):
    return _add_points(p, a4, P, None if Q is None else (Q[0], -Q[1] % p))


def point_count_bsgs(
    E: CurveModP, *, rng: random.Random | None = None, max_points: int = 32
) -> int:
    """#E(F_p) by order-finding on random points.

    Candidate orders inside the Hasse interval are intersected across random
    points alternately drawn from E and its quadratic twist (a candidate m
    for E pins the twist to order 2p + 2 - m) until one survives.
    """
    if rng is None:
        rng = random.Random(0)
    p = E.p
    lo, hi = hasse_interval(p)
    width = hi - lo + 1
    twist = quadratic_twist(E, smallest_nonresidue(p))
    candidates: list[int] | None = None
    for trial in range(max_points):
        on_twist = trial & 1 == 1
        C = twist if on_twist else E
        P = random_point(C, rng)
        if candidates is None:
            found = _annihilators_in_window(C, P, lo, width)
            candidates = (
                [2 * p + 2 - m for m in found] if on_twist else list(found)
            )
        else:
            keep = []
            for m in candidates:
                mm = 2 * p + 2 - m if on_twist else m
                if _mul_raw(C.p, C.a4, P[0], P[1], mm) is None:
                    keep.append(m)
            candidates = keep
        assert candidates, "true group order eliminated; counting bug"
        if len(candidates) == 1:
            return candidates[0]
    raise Ambiguous(
        f"{len(candidates)} candidate orders remain after {max_points} points"
    )


def order_filter(
    E: CurveModP, t: int, *, samples: int = 4, rng: random.Random | None = None
) -> OrderVerdict:
    """Cheap probabilistic test of whether #E is p + 1 - t or p + 1 + t.

    For each sampled point P we compare [p+1]P against [t]P: equality means
    p + 1 - t annihilates P, opposition means p + 1 + t does. NEITHER is
    exact (a point not annihilated by a candidate rules that order out);
    the MATCHES verdicts are probabilistic and get confirmed by an exact
    count downstream. INCONCLUSIVE means both candidates annihilated every
    sample.
    """
    p = E.p
    if not 0 < t <= isqrt(4 * p):
        raise ValueError("trace must satisfy 0 < t <= 2*sqrt(p)")
    if rng is None:
        rng = random.Random(0)
    minus_ok = plus_ok = True
    for _ in range(samples):
        x, y = random_point(E, rng)
        a = _mul_raw(p, E.a4, x, y, p + 1)
        b = _mul_raw(p, E.a4, x, y, t)
        if a is None or b is None:
            same = opposite = a is None and b is None
        else:
            same = a == b
            opposite = a[0] == b[0] and (a[1] + b[1]) % p == 0
        minus_ok = minus_ok and same
        plus_ok = plus_ok and opposite
        if not (minus_ok or plus_ok):
            return OrderVerdict.NEITHER
    if minus_ok and plus_ok:
        return OrderVerdict.INCONCLUSIVE
    return OrderVerdict.MATCHES_MINUS if minus_ok else OrderVerdict.MATCHES_PLUS
