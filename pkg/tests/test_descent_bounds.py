from fractions import Fraction

import pytest

from mordell_bounds.descent_bounds import (
    CurveParams,
    LogBound,
    Marked,
    average_bounds,
    bad_reduction_bound,
    cl2_bound,
    composition_check,
    composition_exponents,
    descent_general,
    hyperelliptic_count_bound,
    rank_bound_hyperelliptic,
    rank_split,
    remond_rank,
    vojta_base,
)
from mordell_bounds.errors import MissingData, RangeError
from mordell_bounds.mordell_counts import log_base_power_check, sqrt_base
from mordell_bounds.numerics import Interval
from mordell_bounds.sphere_packing import integer_bound


def _hyp(g=2, d=1, disc_k=1, disc_f=1, deg=None):
    return CurveParams(g, d, abs_disc_K=disc_k, abs_norm_disc_f=disc_f, deg_f=deg or 2 * g + 1)


# class group bound


def test_cl2_rationals():
    assert cl2_bound(1, 1) == Interval(2)


def test_cl2_quadratic():
    assert cl2_bound(2, 4).contains(64)


def test_cl2_oracle(oracle):
    d, disc = 3, 23
    assert cl2_bound(d, disc).contains(2**d * oracle.mpf(d) ** (oracle.mpf(3 * d) / 2) * oracle.sqrt(disc))


def test_cl2_monotone_in_disc():
    vals = [cl2_bound(3, k) for k in (1, 5, 49, 1000)]
    assert all(a.certainly_lt(b) for a, b in zip(vals, vals[1:]))


def test_cl2_errors():
    with pytest.raises(RangeError):
        cl2_bound(0, 1)
    with pytest.raises(RangeError):
        cl2_bound(2, Fraction(1, 2))


# descent


def test_descent_general_examples():
    assert descent_general(2, 3, [0] * 6, 0) == 22
    assert descent_general(2, 3, [1, 1, 2], 1, odd_degree_orbit=True) == 14
    assert descent_general(2, 0, [2, 3], 1) == 1 + 5 + 1


def test_descent_general_monotone():
    base = descent_general(3, 4, [1, 0], 1)
    assert descent_general(3, 5, [1, 0], 1) > base
    assert descent_general(3, 4, [2, 0], 1) > base
    assert descent_general(3, 4, [1, 0], 2) > base


def test_descent_general_errors():
    with pytest.raises(RangeError):
        descent_general(2, -1, [], 0)
    with pytest.raises(RangeError):
        descent_general(1, 1, [], 0)


def test_rank_hyperelliptic_odd_example(oracle):
    r = rank_bound_hyperelliptic(_hyp())
    assert r.contains(oracle.mpf(15) / 2 * oracle.log(5, 2) + 13)
    assert integer_bound(r) == 30


def test_rank_hyperelliptic_even_example(oracle):
    r = rank_bound_hyperelliptic(_hyp(deg=6))
    assert r.contains((6 + oracle.mpf(9) / 2) * oracle.log(6, 2) + 18 + 1)


def test_rank_hyperelliptic_log_terms(oracle):
    r = rank_bound_hyperelliptic(_hyp(g=3, d=2, disc_k=5, disc_f=7))
    a, b = oracle.log(7, 2), oracle.log(5, 2)
    expected = (4 + oracle.mpf(1) / 2) * a + (3 + oracle.mpf(1) / 2) * b + (9 + oracle.mpf(3) / 2) * 2 * oracle.log(14, 2) + 19 * 2
    assert r.contains(expected)


def test_rank_split_recombines():
    for deg in (5, 6):
        p = _hyp(disc_k=3, disc_f=11, deg=deg)
        split = rank_split(p)
        assert (split.sqrt_part + 2 * split.log_part).overlaps(rank_bound_hyperelliptic(p))


def test_rank_hyperelliptic_missing():
    with pytest.raises(MissingData):
        rank_bound_hyperelliptic(CurveParams(2))
    with pytest.raises(MissingData):
        rank_bound_hyperelliptic(CurveParams(2, deg_f=5))


def test_curve_params_validation():
    with pytest.raises(RangeError):
        CurveParams(2, deg_f=7)
    with pytest.raises(RangeError):
        CurveParams(2, N0=0)
    with pytest.raises(RangeError):
        CurveParams(2, d=0)


# Remond


def test_remond_exact_power():
    r = remond_rank(CurveParams(2))
    assert r == Interval(2**36 - 1)
    assert integer_bound(r) == 68719476735


def test_remond_with_bad_prime(oracle):
    r = remond_rank(CurveParams(2, N0=2))
    extra = 2 * oracle.mpf(2) ** 32 / oracle.log(4) * 16 * oracle.log(2)
    assert r.contains(2**36 - 1 + extra)


def test_remond_monotone_in_N0():
    vals = [remond_rank(CurveParams(2, N0=n)) for n in (1, 2, 3, 30)]
    assert all(a.certainly_lt(b) for a, b in zip(vals, vals[1:]))


# bad reduction


def test_bad_reduction_c3_g2(oracle):
    b = bad_reduction_bound(CurveParams(2))
    c3 = 2 * oracle.mpf(2) ** 32 * oracle.log(1 + 5 / (4 * oracle.sqrt(2)), 4)
    assert b.c3.contains(c3)
    assert abs(float(b.c3) - 3.92e9) < 1e7
    assert b.c3.certainly_lt(2.2 * 2**32 * float(oracle.log(2)))


@pytest.mark.parametrize("g,d", [(2, 1), (2, 3), (3, 1), (4, 2), (6, 1)])
def test_bad_reduction_simplifications(g, d):
    assert all(bad_reduction_bound(CurveParams(g, d)).checks.values())


def test_bad_reduction_inert_exponents():
    b = bad_reduction_bound(CurveParams(2))
    assert b.log2 == b.c1_log2
    assert b.value is None


def test_bad_reduction_log_assembly():
    b = bad_reduction_bound(CurveParams(2, N0=3, abs_disc_K=5))
    from mordell_bounds.numerics import log2

    assert b.log2.overlaps(b.c1_log2 + b.c2 * log2(Interval(3)) + b.c3 * log2(Interval(5)))
    assert (b.c2 / b.c3).contains(16)


def test_bad_reduction_monotone():
    vals = [bad_reduction_bound(CurveParams(2, N0=n)).log2 for n in (1, 2, 9)]
    assert all(a.certainly_lt(b) for a, b in zip(vals, vals[1:]))


def test_vojta_base_branch():
    assert vojta_base(2) == sqrt_base(2)
    assert vojta_base(142).certainly_lt(sqrt_base(142))


# hyperelliptic counts


def test_hyperelliptic_count_odd_example(oracle):
    h = hyperelliptic_count_bound(_hyp())
    l2 = oracle.log10(2)
    expected = 13 + l2 + (9 * oracle.log(5, 2) + 26) * l2 + oracle.mpf(3) / 2 * oracle.log10(5)
    assert abs(float(h.log10) - float(expected)) < 1e-12
    assert h.value is not None and h.value.certainly_gt(10**28)


def test_hyperelliptic_count_even_coefficient(oracle):
    h = hyperelliptic_count_bound(_hyp(deg=6))
    g, d = 2, 1
    expected = (
        oracle.log(10**13, 2)
        + 6 * d + 1
        + (9 * d * oracle.log(6, 2) + 18 * d + 8) * oracle.log(g, 2)
        + oracle.mpf(9) / 2 * oracle.log(6, 2)
    )
    assert h.log2.contains(expected)


def test_hyperelliptic_count_exponents(oracle):
    base = hyperelliptic_count_bound(_hyp(g=3)).log2
    bumped = hyperelliptic_count_bound(_hyp(g=3, disc_f=2)).log2
    assert (bumped - base).overlaps(Interval(4 * oracle.log(3, 2) + oracle.mpf(1) / 2))
    bumped = hyperelliptic_count_bound(_hyp(g=3, disc_k=2)).log2
    assert (bumped - base).overlaps(Interval(3 * oracle.log(3, 2) + oracle.mpf(1) / 2))


def test_composition_exponents_symbolic():
    assert composition_exponents("odd")["norm_disc"] == (Fraction(1, 2), Fraction(4))
    assert composition_exponents("even")["disc_K"] == (Fraction(3, 2), Fraction(3))


@pytest.mark.parametrize("deg_offset", [1, 2])
def test_composition_example_row(deg_offset):
    p = _hyp(deg=4 + deg_offset)
    assert all(composition_check(p).values())


@pytest.mark.parametrize("g", [2, 3, 5, 10, 25, 50])
def test_composition_over_genus(g):
    p = CurveParams(g, 2, abs_disc_K=5, abs_norm_disc_f=10**6, deg_f=2 * g + 2)
    assert all(composition_check(p).values())


def test_log_base_power_full_range():
    assert all(log_base_power_check(g, 64) for g in range(2, 10001))


# averages


def test_average_bounds():
    assert average_bounds(2) == Interval(3 * 10**13 * 256)
    assert average_bounds(2, Marked.NON_WEIERSTRASS) == Interval(6 * 10**13 * 256)


def test_average_base_below_two():
    assert abs(float(sqrt_base(2)) - 1.884) < 1e-3
    assert sqrt_base(2).certainly_lt(2)


def test_log_bound_value_threshold():
    assert LogBound(Interval(10)).value.contains(1024)
    assert LogBound(Interval(2000)).value is None
