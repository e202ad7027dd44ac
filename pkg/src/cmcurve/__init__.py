"""Construct elliptic curves over prime fields with a prescribed number of
points, assembling the required class polynomial modulo n directly from its
reductions at many small primes."""

from .arith import FixedPoint, is_prime, isqrt, legendre, mod_inverse, sqrt_mod_p
from .classpoly import (
    PolyModM,
    Shard,
    build_shard,
    build_shards,
    find_j_invariants,
    load_shard,
    poly_from_roots,
    save_shard,
    shard_path,
)
from .cm import (
    CmParams,
    CurveResult,
    construct_curve,
    derive_cm_params,
    find_all_roots,
    find_root_mod_n,
    hilbert_mod_n,
    verify_order,
)
from .crt import CrtBasis, build_basis, crt_integer, crt_mod_n, round_quotient
from .curves import (
    CurveModP,
    OrderVerdict,
    Point,
    curve,
    curve_from_j,
    hasse_interval,
    order_filter,
    point_add,
    point_count_bsgs,
    point_count_naive,
    quadratic_twist,
    random_point,
    scalar_mul,
)
from .primegen import CrtPrime, PrimeSet, find_crt_primes, prime_stats
from .quadforms import (
    Discriminant,
    QuadForm,
    class_number,
    coefficient_bound_log,
    discriminant,
    is_fundamental,
    reduced_forms,
    sum_inverse_a,
)

__version__ = "0.1.0"
