import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mordell_bounds.errors import DimensionMismatch, DomainError, HypothesisFailed, MissingData, RangeError
from mordell_bounds.mordell_counts import (
    CountBound,
    CountQuery,
    HeightPair,
    LargeVariant,
    Setting,
    Verdict,
    assembly_check,
    bogomolov_cone,
    bogomolov_cone_hypothesis,
    bogomolov_small,
    conductor_coefficient,
    crossover_holds,
    function_field_assembly,
    geometric_bogomolov_bounds,
    large_bound,
    large_chain_checks,
    large_rankin_internal,
    log_base_power_check,
    manin_mumford_bound,
    medium_bound,
    medium_chain_checks,
    medium_shell_bound,
    mordell_bound,
    mumford_gap_check,
    parallelogram_gap_exact,
    phi_coefficient,
    phi_omega_chain,
    quadratic_identity_check,
    quadratic_lemma_holds,
    quadratic_lemma_sides,
    reverse_cauchy_schwarz_gap,
    shell_count,
    vojta_gap_check,
    vojta_shell_count,
    wendel_step,
)
from mordell_bounds.numerics import Interval, acos, sqrt


def _mm(oracle, g):
    return oracle.mpf(32) * 10**10 * oracle.mpf(g) ** (oracle.mpf(17) / 3)


def _theta(cos2):
    return acos(sqrt(Interval(cos2)))


# Manin-Mumford and Bogomolov


@pytest.mark.parametrize("g", [2, 3, 7, 50])
def test_manin_mumford_contains_oracle(oracle, g):
    assert manin_mumford_bound(g).value.contains(_mm(oracle, g))


def test_manin_mumford_g2_value():
    v = manin_mumford_bound(2).value
    assert abs(float(v) - 1.626e13) < 1e10


def test_manin_mumford_increasing():
    vals = [manin_mumford_bound(g).value for g in range(2, 30)]
    assert all(a.certainly_lt(b) for a, b in zip(vals, vals[1:]))


def test_manin_mumford_rejects_genus_one():
    with pytest.raises(RangeError):
        manin_mumford_bound(1)


def test_bogomolov_small_at_zero_is_mm_constant():
    for g in (2, 5, 11):
        assert bogomolov_small(g, 0).value == manin_mumford_bound(g).value


def test_bogomolov_small_half_radius_doubles(oracle):
    b = bogomolov_small(2, sqrt(Interval(Fraction(1, 32))))
    assert b.detail["amplification"].contains(2)
    expected = 2 * _mm(oracle, 2) * (1 + oracle.log(2) / 10**6)
    assert b.value.contains(expected)


def test_bogomolov_small_is_strict():
    assert bogomolov_small(2, 0).strict
    assert bogomolov_small(2, 0).integer == math.floor(float(bogomolov_small(2, 0).value.hi))


def test_bogomolov_small_boundary_rejected():
    with pytest.raises(RangeError):
        bogomolov_small(2, sqrt(Interval(Fraction(1, 16))))
    with pytest.raises(RangeError):
        bogomolov_small(2, -1)


def test_bogomolov_small_increasing_in_radius():
    radii = [Fraction(k, 100) for k in range(0, 25, 4)]
    vals = [bogomolov_small(2, r).value for r in radii]
    assert all(a.certainly_lt(b) for a, b in zip(vals, vals[1:]))


def test_strict_integer_report_on_integral_value():
    assert CountBound(Interval(10), strict=True).integer == 9
    assert CountBound(Interval(10)).integer == 10
    assert CountBound(Interval(Fraction(21, 2)), strict=True).integer == 10


def test_bogomolov_cone_medium_parameters():
    theta = _theta(Fraction(113, 200))
    assert bogomolov_cone_hypothesis(2, 2, theta) is Verdict.CERTIFIED
    assert bogomolov_cone(2, 2, theta).value == manin_mumford_bound(2).value


def test_bogomolov_cone_degenerate_kappa():
    kappa = 1 + Fraction(1, 10**9)
    # gamma is just above 1, so g cos^2 = 1.01 passes and 0.999 fails
    assert bogomolov_cone_hypothesis(2, kappa, _theta(Fraction(101, 200))) is Verdict.CERTIFIED
    assert bogomolov_cone_hypothesis(2, kappa, _theta(Fraction(999, 2000))) is Verdict.FAILED


def test_bogomolov_cone_near_right_angle_fails():
    theta = Interval(Fraction(157, 100))
    with pytest.raises(HypothesisFailed):
        bogomolov_cone(2, 2, theta)


def test_bogomolov_cone_domain():
    with pytest.raises(DomainError):
        bogomolov_cone(2, 1, Interval(Fraction(1, 2)))
    with pytest.raises(DomainError):
        bogomolov_cone(2, 2, Interval(2))


# function-field Bogomolov


def test_geometric_bogomolov_g2():
    ball, cone = geometric_bogomolov_bounds(2, 0, Fraction(167, 100), _theta(Fraction(113, 200)))
    assert ball.value == Interval(347)
    assert cone.value == Interval(252)


@pytest.mark.parametrize("g", [2, 3, 4, 9])
def test_geometric_bogomolov_ball_exact(g):
    ball, cone = geometric_bogomolov_bounds(g, 0)
    assert cone is None
    assert ball.value.contains(Fraction(16 * g**4 + 36 * g**2 - 26 * g - 2, (g - 1) ** 2) + 1)


def test_geometric_bogomolov_small_radius_below_200g2():
    for g in range(2, 20):
        ball, _ = geometric_bogomolov_bounds(g, sqrt(Interval(Fraction(1, 16 * g))))
        assert ball.value.certainly_le(200 * g * g)


def test_geometric_bogomolov_errors():
    with pytest.raises(RangeError):
        geometric_bogomolov_bounds(2, sqrt(Interval(Fraction(1, 16))))
    with pytest.raises(HypothesisFailed):
        geometric_bogomolov_bounds(2, 0, 2, _theta(Fraction(113, 200)))
    with pytest.raises(MissingData):
        geometric_bogomolov_bounds(2, 0, 2, None)


# medium points


@pytest.mark.parametrize("n", range(2, 41))
def test_wendel_step(n):
    lhs, rhs = wendel_step(n)
    assert lhs.certainly_le(rhs)


def test_wendel_step_oracle(oracle):
    lhs, _ = wendel_step(7)
    assert lhs.contains(oracle.gamma(4) / oracle.gamma(oracle.mpf(7) / 2))


def test_shell_counts():
    assert shell_count(2) == 35
    assert shell_count(2, Setting.FUNCTION_FIELD) == 23


def test_shell_count_oracle(oracle):
    for g in (2, 3, 10, 100):
        x = oracle.log(oracle.mpf(12) * 10**8 * oracle.mpf(g) ** (oracle.mpf(7) / 3) * oracle.sqrt(16 * g), 2)
        assert shell_count(g) == int(oracle.ceil(x))


def test_medium_bound_rank_one():
    for g in (2, 3, 8):
        assert medium_bound(g, 1).value.contains(Fraction(164 * 10**11) * g**7)


def test_medium_bound_g2_n10(oracle):
    expected = oracle.mpf(164) * 10**11 * 2**7 * (1 + 5 / (4 * oracle.sqrt(2))) ** 9
    assert medium_bound(2, 10).value.contains(expected)


def test_medium_shell_bound_oracle(oracle):
    g, n = 3, 6
    sin2 = 1 - oracle.mpf(113) / 300
    expected = _mm(oracle, g) * oracle.sqrt(2 * oracle.pi * n) / sin2 ** (oracle.mpf(n - 1) / 2)
    assert medium_shell_bound(g, n).contains(expected)


def test_medium_shell_bound_below_simplified():
    for g in (2, 5, 30):
        for n in (1, 4, 12):
            b = medium_bound(g, n)
            assert b.detail["per_shell"].certainly_le(b.detail["per_shell_simplified"])
            assert (b.detail["shells"] * b.detail["per_shell_simplified"]).certainly_le(b.value)


@pytest.mark.parametrize("g", [2, 3, 4, 6, 10, 50, 142, 1000])
def test_medium_chain(g):
    for n in (1, 2, 7, 30):
        assert all(medium_chain_checks(g, n).values())


def test_medium_function_field():
    b = medium_bound(2, 1, setting=Setting.FUNCTION_FIELD)
    assert b.value == Interval(80000)
    assert (b.detail["shells"] * b.detail["per_shell"]).certainly_le(b.value)


def test_medium_bound_errors():
    with pytest.raises(RangeError):
        medium_bound(2, 0)


# large points


def test_large_rankin_rank_one():
    assert large_bound(2, 1).value == Interval(34 * 10**5 * 4)


def test_large_rankin_internal_g2_n5(oracle):
    c = oracle.sqrt(oracle.mpf(101) / 200)
    a_bound = (1 + oracle.sqrt(c)) * oracle.mpf(5) ** 1.5 / (oracle.sqrt(c) * (1 - c) ** 2)
    shells = int(oracle.ceil(oracle.log(oracle.mpf(10) ** 5 * oracle.mpf(2) ** 2.5) / oracle.log(oracle.mpf(115) / 100)))
    assert vojta_shell_count(2) == shells == 95
    internal = large_rankin_internal(2, 5)
    assert internal.contains(shells * 5 * a_bound)
    assert internal.certainly_le(large_bound(2, 5).value)


@pytest.mark.parametrize("g", [2, 3, 5, 20, 142, 500])
def test_large_rankin_internal_below_bound(g):
    for n in (1, 2, 10, 60):
        assert large_rankin_internal(g, n).certainly_le(large_bound(g, n).value)


@pytest.mark.parametrize("g", [2, 3, 4, 10, 100, 142, 10**4])
def test_large_chain(g):
    assert all(large_chain_checks(g).values())


def test_large_kl_proposition_value(oracle):
    b = large_bound(142, 284, LargeVariant.KL)
    expected = oracle.mpf(24000) * 142 * (1 + 3 * oracle.log(142) / 142) ** 283
    assert b.value.contains(expected)
    assert b.detail["form"] == "direct"


def test_large_kl_padded():
    b = large_bound(142, 5, LargeVariant.KL)
    assert b.detail["form"] == "padded"
    assert b.detail["padded_le_extension"]
    assert b.value.certainly_ge(b.detail["padded"])


def test_large_kl_needs_large_genus():
    with pytest.raises(RangeError):
        large_bound(141, 300, LargeVariant.KL)


@pytest.mark.parametrize("g", [2, 3, 10, 141, 142, 1000, 10**4])
def test_log_base_power(g):
    assert log_base_power_check(g)


# final bound


def test_mordell_rank_zero():
    r = mordell_bound(CountQuery(2, 0))
    assert r.value == Interval(256 * 10**13)
    assert r.integer == 256 * 10**13


def test_mordell_rank_one(oracle):
    r = mordell_bound(CountQuery(2, 1))
    assert r.value.contains(oracle.mpf(256) * 10**13 * (1 + 5 / (4 * oracle.sqrt(2))))
    assert abs(float(r.value) - 4.82e15) < 1e13
    assert r.branch == "sqrt"


def test_mordell_branch_switches_at_142():
    assert mordell_bound(CountQuery(141, 3)).branch == "sqrt"
    assert mordell_bound(CountQuery(142, 3)).branch == "log"


def test_crossover_grid():
    assert all(crossover_holds(g) == (g >= 142) for g in range(2, 501))


def test_mordell_monotone_in_rank_and_genus():
    for setting in Setting:
        for g in (2, 5, 150):
            vals = [mordell_bound(CountQuery(g, r, setting)).value for r in range(8)]
            assert all(a.certainly_le(b) for a, b in zip(vals, vals[1:]))
        vals = [mordell_bound(CountQuery(g, 3, setting)).value for g in range(2, 40)]
        assert all(a.certainly_le(b) for a, b in zip(vals, vals[1:]))


def test_mordell_function_field_min():
    r = mordell_bound(CountQuery(2, 0, Setting.FUNCTION_FIELD))
    assert r.detail["sqrt_form"] == Interval(1.8e6 * 8)
    assert r.detail["log_form"] == Interval(2.5e4 * 256)
    assert r.branch == "log" and r.value == Interval(6400000)
    r = mordell_bound(CountQuery(3, 2, Setting.FUNCTION_FIELD))
    assert r.branch == "sqrt"


def test_count_query_validation():
    with pytest.raises(RangeError):
        CountQuery(1, 0)
    with pytest.raises(RangeError):
        CountQuery(2, -1)
    with pytest.raises(ValueError):
        CountQuery(2, 0, "p-adic")


@pytest.mark.parametrize("g", range(2, 11))
def test_assembly(g):
    for rank in (0, 1, 5, 20):
        assert all(assembly_check(g, rank)["checks"].values())


def test_assembly_refined_large_genus():
    checks = assembly_check(142, 3)["checks"]
    assert checks["refined_sum_le_final"]


def test_function_field_assembly():
    for g in (2, 3, 10):
        checks = function_field_assembly(g, 2)
        assert checks["small_from_ball"] and checks["sqrt_form"]
        assert checks["log_form"] is None
    assert function_field_assembly(142, 2)["log_form"]


# Vojta and Mumford


def _g73(g):
    return Interval(g) ** Interval(Fraction(7, 3))


def test_vojta_certified_example():
    p1 = Fraction(13 * 10**8) * _g73(2)
    p2 = 10**6 * Interval(2) ** Interval(Fraction(5, 2)) * p1
    v = vojta_gap_check(HeightPair(2, p1, p2, 1))
    assert v.hypotheses_hold is Verdict.CERTIFIED
    assert v.angle_bound.contains(sqrt(Interval(Fraction(101, 200))))


def test_vojta_equal_norms_fail():
    p1 = Fraction(13 * 10**8) * _g73(2)
    assert vojta_gap_check(HeightPair(2, p1, p1, 1)).hypotheses_hold is Verdict.FAILED


def test_vojta_straddling_is_undecidable():
    thr = Fraction(12 * 10**8) * _g73(2)
    p1 = Interval(thr.lo * 0.999, thr.hi * 1.001)
    p2 = 10**6 * Interval(2) ** Interval(Fraction(5, 2)) * p1
    assert vojta_gap_check(HeightPair(2, p1, p2, 1)).hypotheses_hold is Verdict.UNDECIDABLE


def test_vojta_function_field():
    g = 2
    p1 = Interval(2 * 10**4 * g)
    p2 = 10**6 * Interval(g) ** Interval(Fraction(5, 2)) * p1
    v = vojta_gap_check(HeightPair(g, p1, p2, 1, Setting.FUNCTION_FIELD))
    assert v.checks["p1_large"] is True
    assert v.hypotheses_hold is Verdict.CERTIFIED
    zero = vojta_gap_check(HeightPair(g, 0, 0, 0, Setting.FUNCTION_FIELD))
    assert zero.checks["p1_positive"] is False


def test_mumford_examples():
    p1 = Interval(2 * 10**9) * _g73(3)
    ok = mumford_gap_check(HeightPair(3, p1, Fraction(11, 10) * p1, 1))
    assert ok.hypotheses_hold is Verdict.CERTIFIED
    assert ok.angle_bound.contains(Fraction(101, 300))
    bad = mumford_gap_check(HeightPair(3, p1, Fraction(116, 100) * p1, 1))
    assert bad.hypotheses_hold is Verdict.FAILED
    below = mumford_gap_check(HeightPair(3, p1, Fraction(99, 100) * p1, 1))
    assert below.hypotheses_hold is Verdict.FAILED


def test_mumford_function_field_equality_probe():
    # g = 8 makes g^(7/3) = 128, so the threshold 1e4 g^(7/3) is an exact integer
    thr = Interval(10**4 * 128)
    v = mumford_gap_check(HeightPair(8, thr, thr, 1, Setting.FUNCTION_FIELD))
    assert v.hypotheses_hold is Verdict.CERTIFIED
    just_below = mumford_gap_check(HeightPair(8, thr - 1, thr, 1, Setting.FUNCTION_FIELD))
    assert just_below.hypotheses_hold is Verdict.FAILED


def test_height_pair_validation():
    with pytest.raises(DomainError):
        HeightPair(2, -1, 1, 1)
    with pytest.raises(DomainError):
        HeightPair(2, 1, 1, 0)
    HeightPair(2, 1, 1, 0, Setting.FUNCTION_FIELD)


# identities


def test_parallelogram_trivial():
    assert quadratic_identity_check([(1, 0), (0, 1)], (0, 0)) == Interval(0)
    assert parallelogram_gap_exact([(1, 0), (0, 1)], (0, 0)) == 0


def test_parallelogram_random_exact():
    rng = random.Random(7)
    for _ in range(200):
        d, n = rng.randint(1, 5), rng.randint(2, 8)
        pts = [[Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(d)] for _ in range(n)]
        x = [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(d)]
        assert parallelogram_gap_exact(pts, x) == 0
        assert quadratic_identity_check(pts, x).contains(0)


def test_parallelogram_dimension_errors():
    with pytest.raises(DimensionMismatch):
        quadratic_identity_check([(1, 0), (0, 1, 2)], (0, 0))
    with pytest.raises(DimensionMismatch):
        parallelogram_gap_exact([(1,)], (0,))


@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("g", range(2, 6))
def test_quadratic_lemma(n, g):
    assert quadratic_lemma_holds(n, g)


def test_quadratic_lemma_detects_changes():
    lhs, rhs = quadratic_lemma_sides(3, 2)
    assert lhs == rhs
    assert ("omega2",) not in lhs
    tampered = dict(rhs)
    key = next(k for k in tampered if k[0] == "G")
    tampered[key] += Fraction(1, 10**6)
    assert tampered != lhs


def test_quadratic_lemma_numeric_instance():
    # evaluate both sides on a concrete Gram matrix with omega^2 = 3
    rng = random.Random(3)
    vecs = [[Fraction(rng.randint(-9, 9)) for _ in range(4)] for _ in range(4)]
    lhs, rhs = quadratic_lemma_sides(4, 3)

    def ev(form):
        total = Fraction(0)
        for key, c in form.items():
            if key[0] == "G":
                total += c * sum(a * b for a, b in zip(vecs[key[1]], vecs[key[2]]))
            else:
                total += c * 3
        return total

    assert ev(lhs) == ev(rhs)


def test_reverse_cauchy_schwarz_example():
    gap = reverse_cauchy_schwarz_gap([1, 3], 3)
    assert gap.contains(Fraction(2, 3))


def test_reverse_cauchy_schwarz_degenerate():
    gap = reverse_cauchy_schwarz_gap([1, 1], 1 + Fraction(1, 10**9))
    assert gap.certainly_nonnegative()
    assert gap.certainly_lt(Fraction(1, 10**15))


def test_reverse_cauchy_schwarz_endpoint_mix(oracle):
    k = oracle.mpf(5)
    gap = reverse_cauchy_schwarz_gap([1, 5], 5)
    assert gap.contains((k + 1) ** 2 / (8 * k) * (1 + k) ** 2 - 1 - k**2)


@settings(max_examples=300, deadline=None)
@given(
    st.integers(min_value=2, max_value=20).flatmap(
        lambda k: st.tuples(
            st.just(k), st.lists(st.fractions(min_value=1, max_value=k, max_denominator=50), min_size=1, max_size=10)
        )
    )
)
def test_reverse_cauchy_schwarz_property(data):
    kappa, values = data
    assert reverse_cauchy_schwarz_gap(values, kappa).certainly_nonnegative() or reverse_cauchy_schwarz_gap(
        values, kappa
    ).contains(0)


def test_reverse_cauchy_schwarz_errors():
    with pytest.raises(RangeError):
        reverse_cauchy_schwarz_gap([1, 4], 3)
    with pytest.raises(RangeError):
        reverse_cauchy_schwarz_gap([1], 1)


# omega^2 chain


def test_phi_coefficients():
    assert phi_coefficient(2) == Fraction(2, 5)
    assert phi_coefficient(3) == Fraction(1, 3)
    assert phi_coefficient(4) == Fraction(38, 109)
    assert phi_coefficient(5) == Fraction(4, 11)


def test_conductor_coefficient_is_weaker():
    for g in range(2, 100):
        assert conductor_coefficient(g) <= phi_coefficient(g)


def test_phi_omega_chain_examples():
    assert phi_omega_chain(2, 1).lower == Interval(Fraction(2, 5))
    assert phi_omega_chain(5, 1).phi_lower.contains(Fraction(4, 11))
    assert phi_omega_chain(3, 0, logN0=88).lower.contains(1)


def test_phi_omega_chain_faltings(oracle):
    rep = phi_omega_chain(2, 1, hFal=1, degree=2)
    assert rep.faltings_upper.contains(2 * (12 + 12 * oracle.log(2 * oracle.pi**2)))


def test_phi_omega_chain_missing():
    rep = phi_omega_chain(2, 1)
    with pytest.raises(MissingData):
        rep.conductor_lower
    with pytest.raises(MissingData):
        rep.faltings_upper
