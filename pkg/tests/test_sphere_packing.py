import math
from fractions import Fraction

import mpmath
import pytest

from mordell_bounds.errors import DomainError, HypothesisUnverified, RangeError
from mordell_bounds.numerics import Interval, euler_e, pi, sqrt
from mordell_bounds.sphere_packing import (
    GegenbauerIndex,
    Method,
    PackingQuery,
    base_from_s,
    calc_bound,
    cap_volume_bound,
    gegenbauer_largest_root,
    greedy_lower_bound,
    integer_bound,
    kl_base_bound,
    kl_bound,
    kl_smallest_degree,
    packing_bound,
    rankin_bound,
    refined_A_bound,
    refined_degree,
    sturm_sign_changes,
    trivial_root_bound,
)

GRID = [pi() / 6, pi() / 4, pi() / 3, Interval(Fraction(13, 10)), pi() / 2, Interval(2)]


def _legendre_largest_root(m):
    with mpmath.workdps(60):
        roots = mpmath.polyroots(mpmath.taylor(lambda x: mpmath.legendre(m, x), 0, m)[::-1], maxsteps=200, extraprec=200)
        return max(mpmath.re(r) for r in roots)


# cap volume


def test_cap_volume_bound_octahedron():
    b = cap_volume_bound(PackingQuery(3, pi() / 2))
    assert b.overlaps(2 / (1 - sqrt(Interval(2)) / 2))
    assert integer_bound(b) == 6


def test_cap_volume_bound_plane():
    assert integer_bound(cap_volume_bound(PackingQuery(2, pi() / 3))) >= 6
    assert integer_bound(cap_volume_bound(PackingQuery(2, pi()))) >= 2


def test_cap_volume_bound_needs_two_dimensions():
    with pytest.raises(DomainError):
        cap_volume_bound(PackingQuery(1, pi() / 2))


@pytest.mark.parametrize("k", range(3, 40))
def test_plane_cap_bound_never_below_exact_value(k):
    theta = 2 * pi() / k + Interval(Fraction(1, 1000))
    exact = math.floor(2 * math.pi / float(theta.mid()))
    assert integer_bound(cap_volume_bound(PackingQuery(2, theta))) >= exact


# Rankin


def test_rankin_examples():
    r = rankin_bound(PackingQuery(2, pi() / 3))
    half = Interval(Fraction(1, 2))
    assert r.overlaps((1 + sqrt(half)) * sqrt(Interval(8)) / half)
    assert abs(r.mid() - mpmath.mpf("9.657")) < 1e-3
    assert rankin_bound(PackingQuery(7, 2 * pi() / 3)) == Interval(8)
    assert rankin_bound(PackingQuery(1, Interval(1))) == Interval(2)


def test_rankin_straddling_right_angle_is_conservative():
    r = rankin_bound(PackingQuery(3, pi() / 2))
    assert r.certainly_ge(4)


def test_rankin_straddling_interval():
    wide = rankin_bound(PackingQuery(3, Interval(1, 2)))
    assert wide.certainly_ge(4)
    assert wide.certainly_ge(rankin_bound(PackingQuery(3, Interval(Fraction(16, 10)))))


# Gegenbauer roots


def test_legendre_p2_root():
    r = gegenbauer_largest_root(GegenbauerIndex(3, 2))
    assert r.overlaps(1 / sqrt(Interval(3)))
    with mpmath.workdps(60):
        assert r.contains(1 / mpmath.sqrt(3))
    assert r.width() < 1e-20


def test_degree_one_root_is_zero():
    for n in range(2, 12):
        assert gegenbauer_largest_root(GegenbauerIndex(n, 1)) == Interval(0)


def test_roots_against_polynomial_oracle():
    for m in range(2, 9):
        ref = _legendre_largest_root(m)
        assert gegenbauer_largest_root(GegenbauerIndex(3, m)).contains(ref)
    for m in range(2, 9):
        assert gegenbauer_largest_root(GegenbauerIndex(2, m)).contains(_cheb(m))


def _cheb(m):
    with mpmath.workdps(60):
        return mpmath.cos(mpmath.pi / (2 * m))


def test_trivial_bound_example():
    idx = GegenbauerIndex(6, 3)
    assert idx.q == 99 and idx.p == 94
    r = gegenbauer_largest_root(idx)
    assert r.certainly_le(trivial_root_bound(idx))


def test_root_ordering():
    for n in range(3, 11):
        roots = [gegenbauer_largest_root(GegenbauerIndex(n, m)) for m in range(1, 12)]
        for a, b in zip(roots, roots[1:]):
            assert a.certainly_lt(b)
        assert roots[-1].certainly_lt(1)


def test_sturm_count_across_returned_interval():
    for n in (3, 7, 40):
        for m in (2, 5, 9):
            idx = GegenbauerIndex(n, m)
            r = gegenbauer_largest_root(idx)
            assert sturm_sign_changes(idx, Interval(r.lo)) == 1
            assert sturm_sign_changes(idx, Interval(r.hi)) == 0


def test_trivial_bound_sandwich():
    for n in range(6, 13):
        for m in range(1, 9):
            idx = GegenbauerIndex(n, m)
            assert gegenbauer_largest_root(idx).certainly_le(trivial_root_bound(idx))


# KL


def test_kl_example_octahedral_angle():
    b = kl_bound(PackingQuery(3, pi() / 2), 2)
    assert b.overlaps(12 / (1 - sqrt(Interval(Fraction(3, 5)))))
    assert abs(b.mid() - mpmath.mpf("53.2")) < 0.05


def test_kl_degree_one_hypothesis():
    assert kl_smallest_degree(PackingQuery(4, Interval(Fraction(16, 10)))) == 1
    with pytest.raises(HypothesisUnverified):
        kl_bound(PackingQuery(4, Interval(Fraction(15, 10))), 1)


def test_refined_bound_at_142():
    r = refined_A_bound(284, 142)
    assert r.m == 6
    assert r.binomial_form == 6 * math.comb(288, 6)
    assert all(r.checks.values()), r.checks
    assert r.value == Interval(6 * math.comb(288, 6))


def test_refined_bound_preconditions():
    with pytest.raises(RangeError):
        refined_A_bound(283, 142)
    with pytest.raises(RangeError):
        refined_A_bound(300, 141)


def test_refined_degree_formula():
    assert refined_degree(284, 142) == 6


def test_base_bound():
    b = kl_base_bound(142)
    assert b.s.certainly_lt(Fraction(2, 100))
    assert all(b.checks.values())
    big = kl_base_bound(10 ** 4)
    assert big.base.certainly_lt(b.base) and big.base.certainly_gt(1)
    assert base_from_s(1).contains(4)


def test_calc_bound_examples():
    assert calc_bound(1, 1, euler_e()).contains(0)
    assert calc_bound(4, Interval(Fraction(1, 2)), sqrt(Interval(2))).certainly_positive()
    assert calc_bound(100, Interval(Fraction(5, 2)), Interval(Fraction(11, 10))).certainly_positive()
    with pytest.raises(DomainError):
        calc_bound(1, 1, 1)


# greedy and soundness


def test_greedy_examples():
    assert greedy_lower_bound(3, math.pi / 2, 2000, 0) >= 6
    assert greedy_lower_bound(2, 2 * math.pi / 5, 1000, 0) == 5
    assert greedy_lower_bound(1, 0.3, 10, 0) == 2


def test_greedy_deterministic():
    a = greedy_lower_bound(5, 1.0, 4000, 42)
    b = greedy_lower_bound(5, 1.0, 4000, 42)
    assert a == b


def test_best_method_records_winner():
    r = packing_bound(PackingQuery(3, pi() / 2))
    assert r.method == Method.CAP_VOLUME.value
    assert set(r.detail["candidates"]) == {"cap_volume", "rankin", "kl"}


def test_bounds_nonincreasing_in_theta():
    thetas = [Interval(Fraction(k, 20)) for k in range(8, 60)]
    for n in (2, 3, 5):
        for method in (Method.CAP_VOLUME, Method.KL):
            vals = [packing_bound(PackingQuery(n, t, method)).value for t in thetas]
            for a, b in zip(vals, vals[1:]):
                assert b.hi <= a.hi or b.overlaps(a)
        rk = [rankin_bound(PackingQuery(n, t)) for t in thetas]
        for a, b in zip(rk, rk[1:]):
            assert b.hi <= a.hi
