"""Point-count bounds for curves of genus g >= 2 inside finite-rank subgroups
of their Jacobians.

Heights are normalised as |x| = sqrt([K:Q] h(x)) with h the Neron-Tate
height, so that the Neron-Tate pairing makes the Mordell-Weil space a
Euclidean space.  Counts are returned as :class:`CountBound` objects that
carry both an enclosure and the integer bound it implies.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    DimensionMismatch,
    DomainError,
    HypothesisFailed,
    MissingData,
    RangeError,
)
from .numerics import interval as I
from .numerics.interval import Interval, working_precision
from .numerics.special import gamma_interval
from .sphere_packing import integer_bound

# leading constants, exact
MM_CONSTANT = Fraction(32 * 10**10)  # 3.2e11
SMALL_CONSTANT = Fraction(65 * 10**10)  # 6.5e11
MEDIUM_CONSTANT = Fraction(164 * 10**11)  # 1.64e13
SHELL_CONSTANT = Fraction(81 * 10**10)  # 8.1e11
LARGE_RANKIN_CONSTANT = Fraction(34 * 10**5)  # 3.4e6
LARGE_KL_CONSTANT = Fraction(24 * 10**3)  # 2.4e4
MORDELL_CONSTANT = Fraction(10**13)
FF_SQRT_CONSTANT = Fraction(18 * 10**5)  # 1.8e6
FF_LOG_CONSTANT = Fraction(25 * 10**3)  # 2.5e4
FF_SMALL_CONSTANT = 200
FF_MEDIUM_CONSTANT = 10**4
FF_SHELL_CONSTANT = 158

VOJTA_NF_THRESHOLD = Fraction(12 * 10**8)  # times g^(7/3) sqrt(omega^2)
VOJTA_FF_THRESHOLD = Fraction(10**4)  # times g sqrt(omega^2)
VOJTA_RATIO = Fraction(10**5)  # times g^(5/2)
MUMFORD_NF_THRESHOLD = Fraction(10**9)  # times g^(7/3) sqrt(omega^2)
MUMFORD_FF_THRESHOLD = Fraction(10**4)  # times g^(7/3) sqrt(omega^2)
MUMFORD_RATIO = Fraction(115, 100)
ANGLE_CONSTANT = Fraction(101, 100)
MEDIUM_COS2 = Fraction(113, 100)  # cos^2 theta = 1.13 / g for the medium shells
KL_GENUS = 142


class Setting(str, enum.Enum):
    NUMBER_FIELD = "number_field"
    FUNCTION_FIELD = "function_field"


class Verdict(str, enum.Enum):
    CERTIFIED = "certified"
    FAILED = "failed"
    UNDECIDABLE = "undecidable"


class LargeVariant(str, enum.Enum):
    RANKIN = "rankin"
    KL = "kl"


def _genus(g):
    if isinstance(g, bool) or int(g) != g:
        raise RangeError("genus must be an integer")
    g = int(g)
    if g < 2:
        raise RangeError("genus must be at least 2")
    return g


def _nonneg_int(n, name):
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise RangeError(f"{name} must be a nonnegative integer")
    return int(n)


def _gpow(g, exponent) -> Interval:
    """g ** exponent for a positive integer g and rational exponent."""
    exponent = Fraction(exponent)
    if exponent.denominator == 1:
        return Interval(Fraction(g) ** exponent)
    q = exponent.denominator
    root = round(g ** (1 / q))
    for r in (root - 1, root, root + 1):
        if r > 0 and r**q == g:
            return Interval(Fraction(r) ** exponent.numerator)
    return I.exp(I.log(Interval(g)) * exponent)


def sqrt_base(g) -> Interval:
    """1 + 5 / (4 sqrt g)."""
    return 1 + 5 / (4 * I.sqrt(Interval(g)))


def log_base(g) -> Interval:
    """1 + 3 log(g) / g."""
    return 1 + 3 * I.log(Interval(g)) / g


def medium_base(g) -> Interval:
    """1 + 5 / (2 sqrt(2) g)."""
    return 1 + 5 / (2 * I.sqrt(Interval(2)) * g)


def _certified_ceil_log(x: Interval, base: Interval) -> int:
    """ceil(log_base(x)) when the enclosure decides it."""
    val = I.log(x) / I.log(base)
    lo, hi = val.floor_bounds()
    if lo != hi or val.contains(lo):
        raise RangeError("logarithm too close to an integer to certify its ceiling")
    return lo + 1


@dataclass(frozen=True)
class CountBound:
    """An upper bound for a cardinality.

    ``strict`` marks bounds of the form count < value, for which the integer
    bound is ceil(hi) - 1 rather than floor(hi).
    """

    value: Interval
    strict: bool = False
    detail: dict = field(default_factory=dict)

    @property
    def integer(self) -> int:
        if not self.strict:
            return integer_bound(self.value)
        lo, hi = self.value.floor_bounds()
        top = Interval(self.value.hi)
        return hi - 1 if top.contains(hi) else hi

    @property
    def log2(self) -> Interval:
        return I.log2(self.value)


@dataclass(frozen=True)
class CountQuery:
    g: int
    rank: int
    setting: Setting = Setting.NUMBER_FIELD

    def __post_init__(self):
        object.__setattr__(self, "g", _genus(self.g))
        object.__setattr__(self, "rank", _nonneg_int(self.rank, "rank"))
        object.__setattr__(self, "setting", Setting(self.setting))


@dataclass(frozen=True)
class HeightPair:
    """Normalised heights |P1|, |P2| and the admissible volume omega^2."""

    g: int
    p1_norm: Interval
    p2_norm: Interval
    omega_sq: Interval
    setting: Setting = Setting.NUMBER_FIELD

    def __post_init__(self):
        object.__setattr__(self, "g", _genus(self.g))
        object.__setattr__(self, "setting", Setting(self.setting))
        for name in ("p1_norm", "p2_norm", "omega_sq"):
            object.__setattr__(self, name, I.iv(getattr(self, name)))
        if self.p1_norm.certainly_negative() or self.p2_norm.certainly_negative():
            raise DomainError("height norms are nonnegative")
        if self.setting is Setting.NUMBER_FIELD and not self.omega_sq.certainly_positive():
            raise DomainError("omega^2 is positive over number fields")
        if self.omega_sq.certainly_negative():
            raise DomainError("omega^2 is nonnegative")


# ---------------------------------------------------------------------------
# Bogomolov and Manin-Mumford
# ---------------------------------------------------------------------------


def manin_mumford_bound(g, prec=None) -> CountBound:
    """3.2e11 g^(17/3)."""
    g = _genus(g)
    with working_precision(prec):
        return CountBound(MM_CONSTANT * _gpow(g, Fraction(17, 3)))


def bogomolov_small(g, r, prec=None) -> CountBound:
    """Strict bound for the points in a ball of radius r sqrt(omega^2):

    3.2e11 g^(17/3) / (1 - 8 g r^2) * (1 + 1e-6 log(1 / (1 - 8 g r^2))).
    """
    g = _genus(g)
    with working_precision(prec):
        r = I.iv(r)
        if r.certainly_negative():
            raise RangeError("radius must be nonnegative")
        r2 = r.square()
        if not r2.certainly_lt(Fraction(1, 8 * g)):
            raise RangeError("radius must satisfy r^2 < 1/(8g)")
        inv = 1 / (1 - 8 * g * r2)
        value = MM_CONSTANT * _gpow(g, Fraction(17, 3)) * inv * (1 + I.log(inv) * Fraction(1, 10**6))
        return CountBound(value, strict=True, detail={"amplification": inv})


def cone_gamma(kappa) -> Interval:
    """(kappa + 1)^2 / (4 kappa)."""
    kappa = I.iv(kappa)
    return (kappa + 1).square() / (4 * kappa)


def _check_cone(kappa, theta):
    kappa, theta = I.iv(kappa), I.iv(theta)
    if not kappa.certainly_gt(1):
        raise DomainError("kappa must exceed 1")
    if not theta.certainly_positive() or not theta.certainly_lt(I.pi() / 2):
        raise DomainError("theta must lie in (0, pi/2)")
    return kappa, theta


def bogomolov_cone_hypothesis(g, kappa, theta, prec=None) -> Verdict:
    """Tri-state check of g cos^2(theta) > (kappa+1)^2/(4 kappa) + 1/(3.2e11 g^(11/3))."""
    g = _genus(g)
    with working_precision(prec):
        kappa, theta = _check_cone(kappa, theta)
        lhs = g * I.cos(theta).square()
        rhs = cone_gamma(kappa) + 1 / (MM_CONSTANT * _gpow(g, Fraction(11, 3)))
        if lhs.certainly_gt(rhs):
            return Verdict.CERTIFIED
        if lhs.certainly_le(rhs):
            return Verdict.FAILED
        return Verdict.UNDECIDABLE


def bogomolov_cone(g, kappa, theta, prec=None) -> CountBound:
    """Points P with |x| <= |P| <= kappa |x| and angle(P, x) <= theta number at
    most 3.2e11 g^(17/3), provided the cone hypothesis holds."""
    verdict = bogomolov_cone_hypothesis(g, kappa, theta, prec)
    if verdict is not Verdict.CERTIFIED:
        raise HypothesisFailed(f"cone hypothesis {verdict.value}")
    return manin_mumford_bound(g, prec)


def geometric_bogomolov_bounds(g, r, kappa=None, theta=None, prec=None):
    """Function-field Bogomolov bounds as (ball bound, cone bound).

    The ball bound is (16g^4 + 36g^2 - 26g - 2) / ((g-1)^2 (1 - 8 g r^2)) + 1.
    The cone bound 16g^2 + 32g + 124 needs g cos^2(theta) > (kappa+1)^2/(4 kappa) + 1/16;
    it is None when kappa and theta are not given.
    """
    g = _genus(g)
    with working_precision(prec):
        r = I.iv(r)
        if r.certainly_negative():
            raise RangeError("radius must be nonnegative")
        r2 = r.square()
        if not r2.certainly_lt(Fraction(1, 8 * g)):
            raise RangeError("radius must satisfy r^2 < 1/(8g)")
        poly = Fraction(16 * g**4 + 36 * g**2 - 26 * g - 2, (g - 1) ** 2)
        ball = CountBound(poly / (1 - 8 * g * r2) + 1)
        if kappa is None and theta is None:
            return ball, None
        if kappa is None or theta is None:
            raise MissingData("the cone bound needs both kappa and theta")
        kappa, theta = _check_cone(kappa, theta)
        lhs = g * I.cos(theta).square()
        if not lhs.certainly_gt(cone_gamma(kappa) + Fraction(1, 16)):
            raise HypothesisFailed("g cos^2(theta) > (kappa+1)^2/(4 kappa) + 1/16 not certified")
        return ball, CountBound(Interval(16 * g * g + 32 * g + 124))


# ---------------------------------------------------------------------------
# medium points
# ---------------------------------------------------------------------------


def wendel_step(n, prec=None):
    """(Gamma((n+1)/2) / Gamma(n/2), sqrt(n/2)); the first is at most the second."""
    n = int(n)
    if n < 1:
        raise RangeError("n must be positive")
    with working_precision(prec):
        lhs = gamma_interval(Fraction(n + 1, 2)) / gamma_interval(Fraction(n, 2))
        return lhs, I.sqrt(Interval(Fraction(n, 2)))


def shell_count(g, setting=Setting.NUMBER_FIELD, prec=None) -> int:
    """Number of dyadic-type shells covering the medium range.

    Number fields: ceil(log_2(1.2e9 g^(7/3) sqrt(16 g))).
    Function fields: ceil(log_1.67(1e4 g sqrt(16 g))).
    """
    g = _genus(g)
    setting = Setting(setting)
    with working_precision(prec):
        if setting is Setting.NUMBER_FIELD:
            ratio = VOJTA_NF_THRESHOLD * _gpow(g, Fraction(7, 3)) * I.sqrt(Interval(16 * g))
            return _certified_ceil_log(ratio, Interval(2))
        ratio = 10**4 * g * I.sqrt(Interval(16 * g))
        return _certified_ceil_log(ratio, Interval(Fraction(167, 100)))


def medium_shell_bound(g, n, prec=None) -> Interval:
    """Points in one shell r < |P| <= 2r: at most 3.2e11 g^(17/3) sqrt(2 pi n) / sin^(n-1)(theta)
    with cos^2(theta) = 1.13 / g."""
    g = _genus(g)
    if int(n) != n or n < 1:
        raise RangeError("rank must be at least 1")
    with working_precision(prec):
        sin2 = Interval(1 - MEDIUM_COS2 / g)
        return (
            MM_CONSTANT
            * _gpow(g, Fraction(17, 3))
            * I.sqrt(2 * I.pi() * n)
            / I.ipow(sin2, Interval(Fraction(n - 1, 2)))
        )


def medium_bound(g, n, prec=None, setting=Setting.NUMBER_FIELD) -> CountBound:
    """Medium points: 1.64e13 g^7 (1 + 5/(2 sqrt2 g))^(n-1) over number fields,
    1e4 g^3 (same base)^(n-1) over function fields."""
    g = _genus(g)
    setting = Setting(setting)
    if int(n) != n or n < 1:
        raise RangeError("rank must be at least 1")
    n = int(n)
    with working_precision(prec):
        base_pow = I.ipow(medium_base(g), n - 1)
        shells = shell_count(g, setting)
        if setting is Setting.NUMBER_FIELD:
            value = MEDIUM_CONSTANT * g**7 * base_pow
            per_shell = medium_shell_bound(g, n)
            simplified = SHELL_CONSTANT * _gpow(g, Fraction(37, 6)) * base_pow
        else:
            value = Interval(FF_MEDIUM_CONSTANT * g**3) * base_pow
            per_shell = FF_SHELL_CONSTANT * _gpow(g, Fraction(5, 2)) * base_pow
            simplified = per_shell
        detail = {"shells": shells, "per_shell": per_shell, "per_shell_simplified": simplified}
        return CountBound(value, detail=detail)


def medium_chain_checks(g, n, prec=None) -> dict:
    """Each inequality in the simplification of the number-field medium bound."""
    g = _genus(g)
    n = int(n)
    with working_precision(prec):
        sin2 = Interval(1 - MEDIUM_COS2 / g)
        a = medium_base(g) * I.sqrt(sin2)
        shells = shell_count(g)
        root2pi = I.sqrt(2 * I.pi())
        lhs_n = I.sqrt(Interval(n)) / I.ipow(sin2, Interval(Fraction(n - 1, 2)))
        rhs_n = I.sqrt(Interval(g)) * I.ipow(medium_base(g), n - 1)
        return {
            "base_lower": I.exp(1 / (I.euler_e() * g)).certainly_le(a),
            "base_upper": a.certainly_le(I.sqrt(Interval(2))),
            "rank_growth": lhs_n.certainly_le(rhs_n),
            "shell_constant": (MM_CONSTANT * root2pi * _gpow(g, Fraction(37, 6))).certainly_le(
                SHELL_CONSTANT * _gpow(g, Fraction(37, 6))
            ),
            "shell_total": Interval(SHELL_CONSTANT * shells).certainly_le(MEDIUM_CONSTANT * _gpow(g, Fraction(5, 6))),
        }


# ---------------------------------------------------------------------------
# large points
# ---------------------------------------------------------------------------


def rankin_formula(n, cos_theta) -> Interval:
    """(1 + sqrt c) n^(3/2) / (sqrt c (1 - c)^((n-1)/2)) with c = cos(theta), or 2 for n = 1."""
    if n == 1:
        return Interval(2)
    c = I.iv(cos_theta)
    root = I.sqrt(c)
    return (1 + root) * I.ipow(Interval(n), Interval(Fraction(3, 2))) / (
        root * I.ipow(1 - c, Interval(Fraction(n - 1, 2)))
    )


def vojta_shell_count(g, prec=None) -> int:
    """ceil(log_1.15(1e5 g^(5/2)))."""
    g = _genus(g)
    with working_precision(prec):
        return _certified_ceil_log(VOJTA_RATIO * _gpow(g, Fraction(5, 2)), Interval(MUMFORD_RATIO))


def large_rankin_internal(g, n, prec=None) -> Interval:
    """ceil(log_1.15(1e5 g^(5/2))) * n * A(n, theta), cos(theta) = sqrt(1.01 / g), with
    A bounded by Rankin's formula."""
    g = _genus(g)
    if int(n) != n or n < 1:
        raise RangeError("rank must be at least 1")
    n = int(n)
    with working_precision(prec):
        cos_theta = I.sqrt(Interval(ANGLE_CONSTANT / g))
        return vojta_shell_count(g) * n * rankin_formula(n, cos_theta)


def large_chain_checks(g, prec=None) -> dict:
    """The g-dependent inequalities simplifying the Rankin large-point bound."""
    g = _genus(g)
    with working_precision(prec):
        rg = I.sqrt(Interval(g))
        a = sqrt_base(g) * I.sqrt(1 - I.sqrt(Interval(ANGLE_CONSTANT / g)))
        quartic = I.sqrt(I.sqrt(Interval(g / ANGLE_CONSTANT)))
        factor = (
            Fraction(6, 5)
            * I.ipow(150 * rg / I.euler_e(), Interval(Fraction(5, 2)))
            * (quartic + 1)
        )
        return {
            "base_lower": I.exp(1 / (60 * rg)).certainly_le(a),
            "base_upper": a.certainly_le(Fraction(6, 5)),
            "polynomial_factor": factor.certainly_le(5 * 10**4 * _gpow(g, Fraction(3, 2))),
            "shell_total": (vojta_shell_count(g) * 5 * 10**4 * _gpow(g, Fraction(3, 2))).certainly_le(
                LARGE_RANKIN_CONSTANT * g * g
            ),
        }


def large_bound(g, n, variant=LargeVariant.RANKIN, prec=None) -> CountBound:
    """Large points.

    rankin: 3.4e6 g^2 (1 + 5/(4 sqrt g))^(n-1).
    kl (g >= 142): 2.4e4 g (1 + 3 log g / g)^(n-1) for n >= 2g, and
    2.4e4 g^8 (1 + 3 log g / g)^(n-1) for smaller n.
    """
    g = _genus(g)
    variant = LargeVariant(variant)
    if int(n) != n or n < 1:
        raise RangeError("rank must be at least 1")
    n = int(n)
    with working_precision(prec):
        if variant is LargeVariant.RANKIN:
            return CountBound(LARGE_RANKIN_CONSTANT * g * g * I.ipow(sqrt_base(g), n - 1))
        if g < KL_GENUS:
            raise RangeError("the refined large-point bound needs g >= 142")
        base = log_base(g)
        if n >= 2 * g:
            return CountBound(LARGE_KL_CONSTANT * g * I.ipow(base, n - 1), detail={"form": "direct"})
        padded = LARGE_KL_CONSTANT * g * I.ipow(base, 2 * g - 1)
        extension = LARGE_KL_CONSTANT * Fraction(g) ** 8 * I.ipow(base, n - 1)
        detail = {
            "form": "padded",
            "padded": padded,
            "padded_le_extension": padded.certainly_le(LARGE_KL_CONSTANT * Fraction(g) ** 8),
        }
        return CountBound(extension, detail=detail)


def log_base_power_check(g, prec=None) -> bool:
    """(1 + 3 log g / g)^g <= g^3."""
    g = _genus(g)
    with working_precision(prec):
        return I.ipow(log_base(g), g).certainly_le(Fraction(g) ** 3)


# ---------------------------------------------------------------------------
# final counts
# ---------------------------------------------------------------------------


def crossover_holds(g, prec=None) -> bool:
    """Decide 1 + 3 log g / g <= 1 + 5/(4 sqrt g) by interval arithmetic.

    Raises RangeError if the enclosures cannot separate the two sides.
    """
    g = _genus(g)
    with working_precision(prec):
        lhs, rhs = log_base(g), sqrt_base(g)
        if lhs.certainly_lt(rhs):
            return True
        if lhs.certainly_gt(rhs):
            return False
        raise RangeError(f"cannot separate the two bases at g = {g}")


@dataclass(frozen=True)
class MordellResult(CountBound):
    branch: str = ""
    setting: Setting = Setting.NUMBER_FIELD


def mordell_bound(q: CountQuery, prec=None) -> MordellResult:
    """Bound for #((C - alpha) cap Lambda) with rk(Lambda) = q.rank.

    Number fields: 1e13 g^8 min{1 + 5/(4 sqrt g), 1 + 3 log g / g}^rank.
    Function fields: min of 1.8e6 g^3 (1 + 5/(4 sqrt g))^rank and
    2.5e4 g^8 (1 + 3 log g / g)^rank.
    """
    g, rank = q.g, q.rank
    with working_precision(prec):
        b_sqrt, b_log = sqrt_base(g), log_base(g)
        if q.setting is Setting.NUMBER_FIELD:
            log_wins = crossover_holds(g)
            base = b_log if log_wins else b_sqrt
            value = MORDELL_CONSTANT * Fraction(g) ** 8 * I.ipow(base, rank)
            branch = "log" if log_wins else "sqrt"
            return MordellResult(value, detail={"crossover_g": KL_GENUS}, branch=branch, setting=q.setting)
        first = FF_SQRT_CONSTANT * Fraction(g) ** 3 * I.ipow(b_sqrt, rank)
        second = FF_LOG_CONSTANT * Fraction(g) ** 8 * I.ipow(b_log, rank)
        if first.certainly_le(second):
            value, branch = first, "sqrt"
        elif second.certainly_le(first):
            value, branch = second, "log"
        else:
            value, branch = I.imin(first, second), "tie"
        detail = {"sqrt_form": first, "log_form": second}
        return MordellResult(value, detail=detail, branch=branch, setting=q.setting)


def small_bound(g, setting=Setting.NUMBER_FIELD, prec=None) -> CountBound:
    """Small points |P| <= sqrt(omega^2 / (16 g)): 6.5e11 g^(17/3), or 200 g^2 over function fields."""
    g = _genus(g)
    with working_precision(prec):
        if Setting(setting) is Setting.NUMBER_FIELD:
            return CountBound(SMALL_CONSTANT * _gpow(g, Fraction(17, 3)))
        return CountBound(Interval(FF_SMALL_CONSTANT * g * g))


def assembly_check(g, rank, prec=None) -> dict:
    """Re-derive the number-field bound from its small, medium and large parts.

    After padding, the subgroup has rank n = rank + 1 and the parts are
    bounded with exponent n - 1 = rank.
    """
    g = _genus(g)
    rank = _nonneg_int(rank, "rank")
    n = rank + 1
    with working_precision(prec):
        small = small_bound(g).value
        medium = medium_bound(g, n).value
        large = large_bound(g, n).value
        total = small + medium + large
        target = MORDELL_CONSTANT * Fraction(g) ** 8 * I.ipow(sqrt_base(g), rank)
        checks = {
            "small_from_ball": bogomolov_small(g, I.sqrt(Interval(Fraction(1, 16 * g)))).value.certainly_le(small),
            "sum_le_2e13_g7": total.certainly_le(2 * MORDELL_CONSTANT * g**7 * I.ipow(sqrt_base(g), rank)),
            "sum_le_final": total.certainly_le(target),
        }
        if g >= KL_GENUS:
            refined = small + medium + large_bound(g, n, LargeVariant.KL).value
            checks["refined_sum_le_final"] = refined.certainly_le(
                MORDELL_CONSTANT * Fraction(g) ** 8 * I.ipow(log_base(g), rank)
            )
        return {"total": total, "target": target, "checks": checks}


def function_field_assembly(g, rank, prec=None) -> dict:
    """Re-derive the two function-field bounds from small, medium and large parts.

    The second bound is only derivable this way for g >= 142; below that its
    check is reported as None.
    """
    g = _genus(g)
    rank = _nonneg_int(rank, "rank")
    n = rank + 1
    with working_precision(prec):
        small = small_bound(g, Setting.FUNCTION_FIELD).value
        medium = medium_bound(g, n, setting=Setting.FUNCTION_FIELD).value
        large = large_bound(g, n).value
        ball, _ = geometric_bogomolov_bounds(g, I.sqrt(Interval(Fraction(1, 16 * g))))
        checks = {
            "small_from_ball": ball.value.certainly_le(small),
            "sqrt_form": (small + medium + large).certainly_le(
                FF_SQRT_CONSTANT * g**3 * I.ipow(sqrt_base(g), rank)
            ),
            "log_form": None,
        }
        if g >= KL_GENUS:
            refined = small + medium + large_bound(g, n, LargeVariant.KL).value
            checks["log_form"] = refined.certainly_le(
                FF_LOG_CONSTANT * Fraction(g) ** 8 * I.ipow(log_base(g), rank)
            )
        return checks


# ---------------------------------------------------------------------------
# Vojta and Mumford hypotheses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GapVerdict:
    hypotheses_hold: Verdict
    angle_bound: Interval
    checks: dict


def _combine(flags) -> Verdict:
    if any(f is False for f in flags):
        return Verdict.FAILED
    if all(f is True for f in flags):
        return Verdict.CERTIFIED
    return Verdict.UNDECIDABLE


def _ge(a: Interval, b) -> Optional[bool]:
    if a.certainly_ge(b):
        return True
    if a.certainly_lt(b):
        return False
    return None


def _gt(a: Interval, b) -> Optional[bool]:
    if a.certainly_gt(b):
        return True
    if a.certainly_le(b):
        return False
    return None


def vojta_gap_check(h: HeightPair, prec=None) -> GapVerdict:
    """Hypotheses under which cos angle(P1, P2) <= sqrt(1.01 / g).

    Number fields: |P1| >= 1.2e9 g^(7/3) sqrt(omega^2) and |P2| >= 1e5 g^(5/2) |P1|.
    Function fields: |P1| >= 1e4 g sqrt(omega^2) and |P2| >= 1e5 g^(5/2) |P1| > 0.
    """
    g = h.g
    with working_precision(prec):
        root = I.sqrt(h.omega_sq)
        if h.setting is Setting.NUMBER_FIELD:
            threshold = VOJTA_NF_THRESHOLD * _gpow(g, Fraction(7, 3)) * root
        else:
            threshold = VOJTA_FF_THRESHOLD * g * root
        checks = {
            "p1_large": _ge(h.p1_norm, threshold),
            "ratio": _ge(h.p2_norm, VOJTA_RATIO * _gpow(g, Fraction(5, 2)) * h.p1_norm),
        }
        if h.setting is Setting.FUNCTION_FIELD:
            checks["p1_positive"] = _gt(h.p1_norm, 0)
        bound = I.sqrt(Interval(ANGLE_CONSTANT / g))
        return GapVerdict(_combine(checks.values()), bound, checks)


def mumford_gap_check(h: HeightPair, prec=None) -> GapVerdict:
    """Hypotheses under which cos angle(P1, P2) <= 1.01 / g:
    |P1| >= c g^(7/3) sqrt(omega^2) with c = 1e9 (number fields) or 1e4
    (function fields), and |P1| <= |P2| <= 1.15 |P1|."""
    g = h.g
    with working_precision(prec):
        c = MUMFORD_NF_THRESHOLD if h.setting is Setting.NUMBER_FIELD else MUMFORD_FF_THRESHOLD
        threshold = c * _gpow(g, Fraction(7, 3)) * I.sqrt(h.omega_sq)
        checks = {
            "p1_large": _ge(h.p1_norm, threshold),
            "p2_ge_p1": _ge(h.p2_norm, h.p1_norm),
            "p2_le_ratio": _ge(MUMFORD_RATIO * h.p1_norm, h.p2_norm),
        }
        return GapVerdict(_combine(checks.values()), Interval(ANGLE_CONSTANT / g), checks)


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------


def _check_dims(points, x):
    if len(points) < 2:
        raise DimensionMismatch("need at least two points")
    d = len(x)
    if d < 1 or any(len(p) != d for p in points):
        raise DimensionMismatch("all vectors must share one positive dimension")
    return d


def parallelogram_gap_exact(points: Sequence[Sequence], x: Sequence) -> Fraction:
    """sum_{i<j} |P_i - P_j|^2 - (n sum |P_i - x|^2 - |sum P_i - n x|^2) in exact arithmetic."""
    d = _check_dims(points, x)
    pts = [[Fraction(c) for c in p] for p in points]
    x = [Fraction(c) for c in x]
    n = len(pts)

    def sq(v):
        return sum(c * c for c in v)

    lhs = sum(sq([a - b for a, b in zip(pts[i], pts[j])]) for i in range(n) for j in range(i + 1, n))
    total = [sum(p[k] for p in pts) - n * x[k] for k in range(d)]
    rhs = n * sum(sq([a - b for a, b in zip(p, x)]) for p in pts) - sq(total)
    return lhs - rhs


def quadratic_identity_check(points, x, prec=None) -> Interval:
    """Generalised parallelogram rule sum_{i<j} |P_i - P_j|^2 = n sum |P_i - x|^2 - |sum P_i - n x|^2,
    returned as an enclosure of LHS - RHS."""
    d = _check_dims(points, x)
    with working_precision(prec):
        pts = [[I.iv(c) for c in p] for p in points]
        xv = [I.iv(c) for c in x]
        n = len(pts)

        def sq(v):
            out = Interval(0)
            for c in v:
                out = out + c.square()
            return out

        lhs = Interval(0)
        for i in range(n):
            for j in range(i + 1, n):
                lhs = lhs + sq([a - b for a, b in zip(pts[i], pts[j])])
        rhs = Interval(0)
        for p in pts:
            rhs = rhs + sq([a - b for a, b in zip(p, xv)])
        total = [sum((p[k] for p in pts), Interval(0)) - n * xv[k] for k in range(d)]
        return lhs - (n * rhs - sq(total))


class _Linear(dict):
    """Linear form over the formal symbols <P_i, P_j> (i <= j) and omega^2."""

    def add(self, other, scale=1):
        out = _Linear(self)
        for key, coeff in other.items():
            out[key] = out.get(key, Fraction(0)) + Fraction(scale) * coeff
            if out[key] == 0:
                del out[key]
        return out

    def scaled(self, scale):
        return _Linear({k: Fraction(scale) * v for k, v in self.items() if scale != 0})


def _gram(i, j):
    return _Linear({("G", min(i, j), max(i, j)): Fraction(1)})


_OMEGA = _Linear({("omega2",): Fraction(1)})


def _dist_sq(i, j):
    return _gram(i, i).add(_gram(j, j)).add(_gram(i, j), -2)


def _pair_height(i, j, g):
    # (|P_i|^2 + |P_j|^2)/g - 2 <P_i, P_j> - omega^2 / (4 g (g-1))
    return (
        _gram(i, i)
        .add(_gram(j, j))
        .scaled(Fraction(1, g))
        .add(_gram(i, j), -2)
        .add(_OMEGA, Fraction(-1, 4 * g * (g - 1)))
    )


def quadratic_lemma_sides(n, g):
    """Both sides of the quadratic identity for n points on a genus g curve, as linear
    forms in the Gram entries and omega^2, after expressing the pair heights through
    the Neron-Tate pairing.

        4(n+g-1)(g-1)/(n-1) sum_{i<j} |P_i - P_j|^2
          = 4ng(g-1)/(n-1) sum_{i<j} h(P_i, P_j) + n^2 omega^2 / 2 + (2g-2)^2 |sum P_i|^2
    """
    if n < 2:
        raise RangeError("the quadratic identity needs n >= 2")
    g = _genus(g)
    lhs = _Linear()
    heights = _Linear()
    for i in range(n):
        for j in range(i + 1, n):
            lhs = lhs.add(_dist_sq(i, j))
            heights = heights.add(_pair_height(i, j, g))
    lhs = lhs.scaled(Fraction(4 * (n + g - 1) * (g - 1), n - 1))
    sum_sq = _Linear()
    for i in range(n):
        for j in range(n):
            sum_sq = sum_sq.add(_gram(i, j))
    rhs = (
        heights.scaled(Fraction(4 * n * g * (g - 1), n - 1))
        .add(_OMEGA, Fraction(n * n, 2))
        .add(sum_sq, (2 * g - 2) ** 2)
    )
    return dict(lhs), dict(rhs)


def quadratic_lemma_holds(n, g) -> bool:
    lhs, rhs = quadratic_lemma_sides(n, g)
    return lhs == rhs


def reverse_cauchy_schwarz_gap(a, kappa, prec=None) -> Interval:
    """(kappa+1)^2 / (4 kappa n) (sum a)^2 - sum a^2 for a_i in [1, kappa]; nonnegative."""
    with working_precision(prec):
        kappa = I.iv(kappa)
        if not kappa.certainly_gt(1):
            raise RangeError("kappa must exceed 1")
        vals = [I.iv(v) for v in a]
        if not vals:
            raise RangeError("need at least one value")
        for v in vals:
            if v.certainly_lt(1) or v.certainly_gt(kappa):
                raise RangeError("values must lie in [1, kappa]")
        n = len(vals)
        total = sum(vals, Interval(0))
        squares = sum((v.square() for v in vals), Interval(0))
        return cone_gamma(kappa) / n * total.square() - squares


# ---------------------------------------------------------------------------
# phi-invariant and admissible volume
# ---------------------------------------------------------------------------


def phi_coefficient(g) -> Fraction:
    """c(g) with omega^2 >= c(g) phi: 2/5, 1/3, 38/109 for g = 2, 3, 4 and (g-1)/(2g+1) beyond."""
    g = _genus(g)
    return {2: Fraction(2, 5), 3: Fraction(1, 3), 4: Fraction(38, 109)}.get(g, Fraction(g - 1, 2 * g + 1))


def conductor_coefficient(g) -> Fraction:
    """max{g-1, 2} / (2g+1), the coefficient in the conductor chain."""
    g = _genus(g)
    return Fraction(max(g - 1, 2), 2 * g + 1)


@dataclass(frozen=True)
class OmegaReport:
    g: int
    phi_lower: Interval
    _conductor_lower: Optional[Interval] = None
    _faltings_upper: Optional[Interval] = None

    @property
    def conductor_lower(self) -> Interval:
        if self._conductor_lower is None:
            raise MissingData("log N0 was not supplied")
        return self._conductor_lower

    @property
    def faltings_upper(self) -> Interval:
        if self._faltings_upper is None:
            raise MissingData("the Faltings height was not supplied")
        return self._faltings_upper

    @property
    def lower(self) -> Interval:
        """Best available lower bound for omega^2."""
        if self._conductor_lower is None:
            return self.phi_lower
        return I.imax(self.phi_lower, self._conductor_lower)


def phi_omega_chain(g, phi, logN0=None, hFal=None, degree=1, prec=None) -> OmegaReport:
    """Bounds on omega^2 from phi, from log N0 (omega^2 >= log(N0) / 88) and from the
    Faltings height (omega^2 <= [K:Q] (12 h_Fal + 6 g log(2 pi^2)))."""
    g = _genus(g)
    with working_precision(prec):
        phi = I.iv(phi)
        lower = phi_coefficient(g) * phi
        cond = None if logN0 is None else I.iv(logN0) / 88
        upper = None
        if hFal is not None:
            upper = degree * (12 * I.iv(hFal) + 6 * g * I.log(2 * I.pi().square()))
        return OmegaReport(g, lower, cond, upper)
