import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmcurve.arith import is_prime, isqrt, task_rng
from cmcurve.curves import (
    CurveModP,
    OrderVerdict,
    curve,
    curve_from_j,
    hasse_interval,
    is_on_curve,
    j_invariant,
    order_filter,
    point_add,
    point_count_bsgs,
    point_count_naive,
    quadratic_twist,
    random_point,
    scalar_mul,
    smallest_nonresidue,
)
from cmcurve.errors import NotANonResidue, SpecialJ, TooLarge


def brute_count(p, a4, a6):
    """Independent point count: enumerate y^2 values, then sum solutions."""
    sols = {}
    for y in range(p):
        sols[y * y % p] = sols.get(y * y % p, 0) + 1
    return 1 + sum(sols.get((x * x % p * x + a4 * x + a6) % p, 0) for x in range(p))


SMALL_PRIMES = [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 101, 257]


def random_curve(rng, p):
    while True:
        a4, a6 = rng.randrange(p), rng.randrange(p)
        if (4 * a4 ** 3 + 27 * a6 ** 2) % p:
            return curve(p, a4, a6)


def test_curve_from_j_golden_curve():
    E = curve_from_j(118481, 141767)
    assert (E.a4, E.a6) == (39103, 120580)
    assert E.j == 118481


def test_curve_from_j_small_case_and_j_roundtrip():
    E = curve_from_j(2, 17)
    assert (E.a4, E.a6) == (12, 8)
    assert j_invariant(17, 12, 8) == 2


def test_curve_from_j_rejects_special_values():
    with pytest.raises(SpecialJ):
        curve_from_j(0, 17)
    with pytest.raises(SpecialJ):
        curve_from_j(1728, 141767)
    with pytest.raises(SpecialJ):
        curve_from_j(11, 17)  # 1728 = 11 (mod 17)


@given(st.integers(0, 10 ** 6))
def test_curve_from_j_has_requested_j_invariant(seed):
    rng = random.Random(seed)
    p = rng.choice([101, 257, 65537, 141767])
    j = rng.randrange(p)
    if j in (0, 1728 % p):
        return
    E = curve_from_j(j, p)
    assert j_invariant(E.p, E.a4, E.a6) == j


def test_singular_curve_rejected():
    with pytest.raises(ValueError):
        curve(7, 0, 0)
    with pytest.raises(ValueError):
        CurveModP(p=3, a4=1, a6=1, j=0)


def test_point_count_naive_tiny_curve():
    assert brute_count(5, 1, 0) == 4
    assert point_count_naive(curve(5, 1, 0)) == 4


def test_point_count_naive_matches_brute_force():
    rng = random.Random(11)
    for _ in range(25):
        p = rng.choice(SMALL_PRIMES)
        E = random_curve(rng, p)
        assert point_count_naive(E) == brute_count(p, E.a4, E.a6)


def test_point_count_curve_j2_mod_17():
    E = curve_from_j(2, 17)
    n = point_count_naive(E)
    assert n in (15, 21)
    assert n == brute_count(17, E.a4, E.a6) == 15


def test_point_count_golden_curve():
    E = curve_from_j(118481, 141767)
    assert point_count_naive(E) == 142521


def test_point_count_respects_cap():
    with pytest.raises(TooLarge):
        point_count_naive(curve_from_j(2, 141767), cap=10 ** 5)


def test_hasse_bound_on_counted_curves():
    rng = random.Random(13)
    for _ in range(40):
        p = rng.choice(SMALL_PRIMES)
        E = random_curve(rng, p)
        lo, hi = hasse_interval(p)
        assert lo <= point_count_naive(E) <= hi


def test_bsgs_equals_naive_on_random_curves():
    rng = random.Random(17)
    checked = 0
    while checked < 40:
        p = rng.randrange(500, 1 << 16) | 1
        if not is_prime(p):
            continue
        E = random_curve(rng, p)
        assert point_count_bsgs(E, rng=task_rng(42, "bsgs", p)) == point_count_naive(E)
        checked += 1


def test_bsgs_golden_curves():
    E = curve_from_j(118481, 141767)
    assert point_count_bsgs(E, rng=task_rng(0)) == 142521
    big = curve_from_j(28534, 1434707)
    assert point_count_bsgs(big, rng=task_rng(0)) in (1434708 - 2215, 1434708 + 2215)


def test_order_filter_rejects_wrong_j():
    # j = 5 gives a 22-point curve over F_17; 22 is coprime to both 15 and 21,
    # so every sampled point rules both candidates out.
    E = curve_from_j(5, 17)
    assert brute_count(17, E.a4, E.a6) == 22
    for seed in range(5):
        assert order_filter(E, 3, rng=task_rng(seed)) is OrderVerdict.NEITHER


def test_order_filter_accepts_matching_j():
    E = curve_from_j(2, 17)
    verdict = order_filter(E, 3, rng=task_rng(1))
    assert verdict in (OrderVerdict.MATCHES_MINUS, OrderVerdict.MATCHES_PLUS)
    assert verdict is OrderVerdict.MATCHES_MINUS  # the 15-point branch


def test_order_filter_never_false_negative():
    # every point of a curve with order p+1-t is annihilated by p+1-t
    rng = random.Random(23)
    for _ in range(20):
        p = rng.choice([29, 37, 41, 101])
        E = random_curve(rng, p)
        n = point_count_naive(E)
        t = p + 1 - n
        if t == 0 or abs(t) > isqrt(4 * p):
            continue
        verdict = order_filter(E, abs(t), samples=4, rng=task_rng(rng.random()))
        assert verdict is not OrderVerdict.NEITHER


def test_order_filter_matches_are_sound():
    rng = random.Random(29)
    for _ in range(60):
        p = rng.choice([101, 257, 1009])
        E = random_curve(rng, p)
        t = rng.randrange(1, isqrt(4 * p) + 1)
        verdict = order_filter(E, t, rng=task_rng(rng.random()))
        n = point_count_naive(E)
        if verdict is OrderVerdict.MATCHES_MINUS:
            assert n == p + 1 - t
        elif verdict is OrderVerdict.MATCHES_PLUS:
            assert n == p + 1 + t
        elif verdict is OrderVerdict.NEITHER:
            assert n not in (p + 1 - t, p + 1 + t)


def test_order_filter_precondition():
    with pytest.raises(ValueError):
        order_filter(curve_from_j(2, 17), 9)  # 9 > 2*sqrt(17)


def test_scalar_mul_basics():
    E = curve_from_j(2, 17)
    P = random_point(E, task_rng(3))
    assert scalar_mul(E, P, 0) is None
    assert scalar_mul(E, P, 1) == P
    n = point_count_naive(E)
    assert scalar_mul(E, P, n) is None  # Lagrange


def test_scalar_mul_lagrange_random_curves():
    rng = random.Random(31)
    for _ in range(20):
        p = rng.choice(SMALL_PRIMES)
        E = random_curve(rng, p)
        P = random_point(E, rng)
        assert scalar_mul(E, P, point_count_naive(E)) is None


@settings(max_examples=60)
@given(st.integers(0, 400), st.integers(0, 400), st.integers(0, 10 ** 9))
def test_scalar_mul_distributes(a, b, seed):
    rng = random.Random(seed)
    E = random_curve(rng, 101)
    P = random_point(E, rng)
    left = scalar_mul(E, P, a + b)
    right = point_add(E, scalar_mul(E, P, a), scalar_mul(E, P, b))
    assert left == right


def test_random_point_always_on_curve_and_affine():
    E = curve_from_j(2, 17)
    rng = task_rng(5)
    for _ in range(100):
        P = random_point(E, rng)
        assert P is not None
        assert is_on_curve(E, P)


def test_random_point_seeded_is_deterministic():
    E = curve_from_j(7, 141767)
    pts_a = [random_point(E, task_rng(9, i)) for i in range(5)]
    pts_b = [random_point(E, task_rng(9, i)) for i in range(5)]
    assert pts_a == pts_b


def test_random_point_tiny_curve_hits_known_points():
    E = curve(5, 1, 0)
    affine = {(x, y) for x in range(5) for y in range(5) if (y * y - x ** 3 - x) % 5 == 0}
    for i in range(10):
        assert random_point(E, task_rng(i)) in affine


def test_quadratic_twist_properties():
    rng = random.Random(37)
    for _ in range(50):
        p = rng.choice(SMALL_PRIMES)
        E = random_curve(rng, p)
        c = smallest_nonresidue(p)
        T = quadratic_twist(E, c)
        assert T.j == E.j
        assert brute_count(p, E.a4, E.a6) + brute_count(p, T.a4, T.a6) == 2 * p + 2
        TT = quadratic_twist(T, c)
        assert point_count_naive(TT) == point_count_naive(E)


def test_quadratic_twist_rejects_residue():
    with pytest.raises(NotANonResidue):
        quadratic_twist(curve_from_j(2, 17), 4)
