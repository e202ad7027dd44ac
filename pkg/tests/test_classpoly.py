import random

import pytest

from cmcurve.classpoly import (
    PolyModM,
    build_shard,
    build_shards,
    find_j_invariants,
    load_shard,
    poly_from_roots,
    save_shard,
    shard_from_json,
    shard_path,
    shard_to_json,
)
from cmcurve.curves import point_count_naive, curve_from_j
from cmcurve.errors import WrongCount
from cmcurve.primegen import CrtPrime, find_crt_primes
from cmcurve.quadforms import Discriminant, discriminant

# golden shard table for D = -59: p -> (t, j-invariants, poly low-to-high)
D59_TABLE = {
    17: (3, [2, 7, 13], (5, 12, 12, 1)),
    71: (15, [51, 54, 67], (11, 62, 41, 1)),
    197: (27, [71, 130, 195], (139, 160, 195, 1)),
    521: (45, [103, 366, 367], (510, 379, 206, 1)),
    827: (57, [97, 498, 554], (196, 824, 505, 1)),
    1907: (87, [24, 915, 1613], (1045, 1432, 1262, 1)),
    3797: (123, [70, 958, 2381], (1584, 1114, 388, 1)),
}


def test_poly_from_roots_examples():
    assert poly_from_roots([2, 7, 13], 17).coeffs == (5, 12, 12, 1)
    assert poly_from_roots([51, 54, 67], 71).coeffs == (11, 62, 41, 1)
    assert poly_from_roots([], 97).coeffs == (1,)


def test_poly_from_roots_has_the_roots():
    rng = random.Random(3)
    for _ in range(20):
        m = rng.choice([97, 101, 1009])
        roots = [rng.randrange(m) for _ in range(rng.randrange(1, 8))]
        poly = poly_from_roots(roots, m)
        assert poly.degree == len(roots)
        assert all(poly.evaluate(r) == 0 for r in roots)


def test_polymodm_validation():
    with pytest.raises(ValueError):
        PolyModM(modulus=7, coeffs=(1, 9))
    with pytest.raises(ValueError):
        PolyModM(modulus=7, coeffs=(1, 0))
    assert PolyModM(modulus=7, coeffs=()).degree == -1


def test_find_j_invariants_golden_rows():
    disc = discriminant(-59)
    assert find_j_invariants(disc, CrtPrime(17, 3)) == [2, 7, 13]
    assert find_j_invariants(disc, CrtPrime(521, 45)) == [103, 366, 367]


def test_find_j_invariants_without_prefilter_agrees():
    disc = discriminant(-59)
    direct = find_j_invariants(disc, CrtPrime(197, 27), prefilter=False)
    filtered = find_j_invariants(disc, CrtPrime(197, 27), prefilter=True)
    assert direct == filtered == [71, 130, 195]


def test_find_j_invariants_rejects_mismatched_prime():
    disc = discriminant(-59)
    with pytest.raises(ValueError):
        find_j_invariants(disc, CrtPrime(17, 5))


def test_wrong_count_aborts():
    # class number forced wrong: the scan still finds 3 roots, not 4
    fake = Discriminant(D=-59, d=59, h=4, log_B=41.3)
    with pytest.raises(WrongCount):
        find_j_invariants(fake, CrtPrime(17, 3))


def test_build_shard_matches_golden_rows():
    disc = discriminant(-59)
    for p, (t, js, coeffs) in D59_TABLE.items():
        shard = build_shard(disc, CrtPrime(p, t))
        assert shard.j_set == tuple(js)
        assert shard.poly.coeffs == coeffs
        assert shard.h == 3


def test_shard_roots_confirmed_by_exact_count():
    disc = discriminant(-59)
    shard = build_shard(disc, CrtPrime(3797, 123))
    for j in shard.j_set:
        n = point_count_naive(curve_from_j(j, 3797))
        assert n in (3798 - 123, 3798 + 123)


def test_shard_poly_is_squarefree():
    disc = discriminant(-59)
    shard = build_shard(disc, CrtPrime(827, 57))
    # distinct roots guarantee gcd(f, f') = 1
    from cmcurve.cm import _pgcd

    f = list(shard.poly.coeffs)
    fprime = [(i * c) % 827 for i, c in enumerate(f)][1:]
    assert _pgcd(f, fprime, 827) == [1]


def test_shard_json_roundtrip_is_bit_exact():
    disc = discriminant(-59)
    shard = build_shard(disc, CrtPrime(71, 15))
    text = shard_to_json(shard)
    again = shard_from_json(text)
    assert again == shard
    assert shard_to_json(again) == text


def test_shard_json_rejects_corruption():
    disc = discriminant(-59)
    shard = build_shard(disc, CrtPrime(71, 15))
    text = shard_to_json(shard).replace('"51"', '"52"')
    with pytest.raises(ValueError):
        shard_from_json(text)


def test_shard_cache_layout_and_reload(tmp_path):
    disc = discriminant(-59)
    shard = build_shard(disc, CrtPrime(17, 3))
    path = save_shard(shard, tmp_path)
    assert path == tmp_path / "D59" / "p17.json"
    assert load_shard(path) == shard


def test_build_shards_uses_cache(tmp_path):
    disc = discriminant(-59)
    ps = find_crt_primes(disc, target_log=10.0)
    first = build_shards(disc, ps.primes, cache_dir=tmp_path)
    stamp = [shard_path(tmp_path, disc.D, cp.p).stat().st_mtime_ns for cp in ps.primes]
    second = build_shards(disc, ps.primes, cache_dir=tmp_path)
    stamp2 = [shard_path(tmp_path, disc.D, cp.p).stat().st_mtime_ns for cp in ps.primes]
    assert first == second
    assert stamp == stamp2  # untouched on the second pass


def test_build_shards_parallel_matches_serial():
    disc = discriminant(-59)
    ps = find_crt_primes(disc)
    serial = build_shards(disc, ps.primes, jobs=1)
    parallel = build_shards(disc, ps.primes, jobs=2)
    assert serial == parallel


def test_seed_changes_nothing_in_output():
    disc = discriminant(-59)
    a = build_shard(disc, CrtPrime(197, 27), seed=0)
    b = build_shard(disc, CrtPrime(197, 27), seed=12345)
    assert a == b


def test_integer_reconstruction_reduces_back_to_every_shard():
    from cmcurve.crt import crt_integer

    disc = discriminant(-59)
    shards = build_shards(disc, find_crt_primes(disc).primes)
    moduli = [s.p for s in shards]
    ints = [
        crt_integer(moduli, [s.poly.coeffs[i] for s in shards])
        for i in range(disc.h)
    ]
    for s in shards:
        assert tuple(v % s.p for v in ints) == s.poly.coeffs[:-1]
