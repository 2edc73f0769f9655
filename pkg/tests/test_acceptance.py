"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are collected by ``conftest.pytest_terminal_summary`` so they show
up in the terminal summary even when output capture is on.
"""

import contextlib
import math
import random
import time
from fractions import Fraction

import mpmath

from mordell_bounds import descent_bounds as D
from mordell_bounds import hyperbolic as H
from mordell_bounds import mordell_counts as M
from mordell_bounds import sphere_packing as S
from mordell_bounds.cli_verify import verify_all
from mordell_bounds.errors import BoundsError
from mordell_bounds.numerics import Interval, working_precision
from mordell_bounds.numerics import interval as I

RESULTS = {}


@contextlib.contextmanager
def criterion(number, label, limit_s):
    start = time.perf_counter()
    ok, note = False, ""
    try:
        yield
        elapsed = time.perf_counter() - start
        ok = elapsed < limit_s
        note = f"{elapsed:.2f}s (limit {limit_s}s)"
        assert ok, f"criterion {number} took {elapsed:.2f}s, limit {limit_s}s"
    except AssertionError as exc:
        if not note:
            note = f"assertion failed: {exc}"
        raise
    except Exception as exc:
        note = f"{type(exc).__name__}: {exc}"
        raise
    finally:
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d} {label}: {note}"
        RESULTS[number] = line
        print(line)


def within(x, target, tol):
    return abs(x - Fraction(target)).certainly_lt(tol)


def test_criterion_01_constants():
    with criterion(1, "disc integrals and table comparisons", 10), working_precision(128):
        for j, printed in ((1, "0.0073593"), (2, "0.0083267"), (3, "0.0094402")):
            assert within(H.disc_integral(j), printed, Fraction(1, 10**6)), j
        for name in ("I5", "I6", "I7", "I8", "xi1", "xi2", "xi3", "xi4", "theta1"):
            for g in (2, 3, 4):
                assert H.constant_is_exact(name, g), (name, g)
                value = H.analytic_constant(name, g)
                assert value.width() <= abs(value.mid()) * mpmath.mpf(2) ** -120, (name, g)
        rows = H.thick_part_table()
        g2_value, g2_i5 = rows[0][1], rows[0][2]
        assert g2_i5 == Fraction(11, 495)
        assert within(g2_value, "0.02228", Fraction(1, 10**5))
        for g, value, i5 in rows:
            assert value.certainly_gt(i5), g
        for g in range(6, 13):
            assert H.thick_part_I4(g, H.I4_GENUS_INDEX[g]).certainly_gt(H.analytic_constant("I5", g)), g
        for g in list(range(2, 31)) + [50, 100, 1000]:
            for row in H.table_comparison_rows(g):
                assert row.holds, (row.label, g)
            assert H.xi_generic_holds(g) == (True, True)
            assert H.xi_sufficiency_holds(g)[0]
            assert H.xi_ratio_holds(g) and H.xi2_is_product(g)


def test_criterion_02_heat_margin():
    with criterion(2, "heat kernel diagonal margin", 5):
        value, below = H.heat_diag_constant(128)
        assert below and value.certainly_lt(Fraction(3, 100000))
        assert within(value, "0.0000299", Fraction(1, 10**6))
        with working_precision(64):
            a, t = I.asinh(Interval(1)) * 2, Fraction(1, 20)
            u, majorant = H.heat_u_bound(a, t, 64, rel_tol=2**-10)
            scaled = u / I.ipow(Interval(t), Interval(Fraction(3, 2)))
        assert u.certainly_le(majorant)
        assert scaled.certainly_lt(Fraction(3, 100000))


def test_criterion_03_proof_decimals():
    tol = {
        "collar_width_margin": ("2.246232", Fraction(1, 10**4)),
        "localization_constant": ("198.8567", Fraction(1, 10**3)),
        "peak_section_constant": ("239.960239024", Fraction(1, 10**6)),
    }
    with criterion(3, "long proof decimals", 5):
        found = H.proof_decimals(128)
        assert set(found) == set(tol)
        for name, (value, printed) in found.items():
            expected, eps = tol[name]
            assert printed == expected
            assert within(value, expected, eps), name


THETAS = {
    "pi/6": (lambda: I.pi() / 6, math.pi / 6),
    "pi/4": (lambda: I.pi() / 4, math.pi / 4),
    "pi/3": (lambda: I.pi() / 3, math.pi / 3),
    "1.3": (lambda: Interval("1.3"), 1.3),
    "pi/2": (lambda: I.pi() / 2, math.pi / 2),
    "2": (lambda: Interval(2), 2.0),
}
# floor(2 pi / theta): the regular polygon count in the plane
PLANAR = {"pi/6": 12, "pi/4": 8, "pi/3": 6, "1.3": 4, "pi/2": 4, "2": 3}


def test_criterion_04_packing_soundness():
    with criterion(4, "greedy configurations never beat upper bounds", 60), working_precision(128):
        applicable = 0
        for n in range(2, 9):
            for name, (exact, approx) in THETAS.items():
                theta = exact()
                lower = S.greedy_lower_bound(n, approx, 10**4, 0)
                known = PLANAR[name] if n == 2 else lower
                assert lower <= known
                for method in S.Method:
                    try:
                        bound = S.packing_bound(S.PackingQuery(n, theta, method))
                    except BoundsError:
                        continue
                    applicable += 1
                    assert not bound.value.certainly_lt(known), (n, name, method)
                    assert known <= bound.integer, (n, name, method)
        assert applicable >= 2 * 7 * 6


def test_criterion_05_gegenbauer_roots():
    with criterion(5, "Gegenbauer root enclosures", 10), working_precision(128):
        root = S.gegenbauer_largest_root(S.GegenbauerIndex(3, 2))
        with mpmath.workdps(50):
            assert root.contains(1 / mpmath.sqrt(3))
        assert root.width() < mpmath.mpf(10) ** -20
        for n in range(6, 13):
            roots = [S.gegenbauer_largest_root(S.GegenbauerIndex(n, m)) for m in range(1, 9)]
            for a, b in zip(roots, roots[1:]):
                assert a.certainly_lt(b), n
            for m, r in enumerate(roots, start=1):
                assert r.certainly_le(S.trivial_root_bound(S.GegenbauerIndex(n, m))), (n, m)


def test_criterion_06_refined_kl():
    with criterion(6, "refined KL bound at g = 142, n = 284", 10), working_precision(128):
        r = S.refined_A_bound(284, 142)
        assert r.m == 6
        assert r.checks["cos_theta_le_root"]
        n, m = 284, 6
        ratio = Fraction((n - 1) * (n - 5), (2 * m + n + 1) * (2 * m + n - 1))
        assert ratio >= Fraction(89, 100) and r.checks["ratio_at_least_0.89"]
        assert r.binomial_form == 6 * math.comb(288, 6) == 4512412640736
        assert all(r.checks.values()), r.checks


def test_criterion_07_crossover():
    with criterion(7, "crossover exactly at g = 142", 5):
        flips = [g for g in range(2, 10**4 + 1) if M.crossover_holds(g, 64) != (g >= 142)]
        assert flips == []


def test_criterion_08_identities():
    with criterion(8, "exact identities and reverse Cauchy-Schwarz", 30):
        rng = random.Random(2024)
        for _ in range(1000):
            d, n = rng.randint(1, 5), rng.randint(2, 8)
            pts = [[Fraction(rng.randint(-99, 99), rng.randint(1, 20)) for _ in range(d)] for _ in range(n)]
            x = [Fraction(rng.randint(-99, 99), rng.randint(1, 20)) for _ in range(d)]
            assert M.parallelogram_gap_exact(pts, x) == 0
        for n in range(2, 7):
            for g in range(2, 6):
                assert M.quadratic_lemma_holds(n, g), (n, g)
        with working_precision(128):
            for _ in range(1000):
                kappa = Fraction(rng.randint(2, 40), rng.randint(1, 3))
                if kappa <= 1:
                    kappa = Fraction(2)
                values = [1 + (kappa - 1) * Fraction(rng.randint(0, 100), 100) for _ in range(rng.randint(1, 10))]
                if len(values) == 1:
                    values.append(values[0])
                gap = M.reverse_cauchy_schwarz_gap(values, kappa)
                assert gap.hi >= 0 and (gap.certainly_ge(0) or gap.contains(0)), (values, kappa)


# sandwiches for both k = 0 solutions, and monotone ratios for every k
ODE_CLAIMS = {"u01_lower", "u01_upper", "u02_lower", "u02_upper", "ratio_increasing_1", "ratio_increasing_2"}


def test_criterion_09_ode_sandwich():
    with criterion(9, "collar ODE comparison", 60):
        seen = set()
        for eps in (Fraction(1, 100), Fraction(1, 10), Fraction(6, 25)):
            for k in (0, 1, 2):
                r = H.ode_comparison_suite(1, eps, k, 3, 128)
                assert r.parity
                seen |= {c.claim for c in r.checks}
                assert all(c.margin.certainly_positive() for c in r.checks), (eps, k, r.failures()[:2])
        assert seen == ODE_CLAIMS


def test_criterion_10_assembly():
    with criterion(10, "assembly and hyperelliptic composition", 30), working_precision(128):
        for g in range(2, 11):
            for rank in range(0, 21):
                report = M.assembly_check(g, rank)
                assert all(report["checks"].values()), (g, rank, report["checks"])
        for deg in (5, 6):
            p = D.CurveParams(2, 1, abs_disc_K=1, abs_norm_disc_f=1, deg_f=deg)
            checks = D.composition_check(p)
            assert all(checks.values()), (deg, checks)


def test_criterion_11_full_verify():
    with criterion(11, "full catalog at 256 bits, byte-identical", 300):
        first = verify_all(prec=256)
        second = verify_all(prec=256)
        s = first.summary
        assert s["refuted"] == 0
        assert s["undecided"] <= 0.02 * s["total"]
        assert first.canonical().encode() == second.canonical().encode()
