"""Certified Gamma function, Robbins factorial bounds and spherical cap measures."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import libmp as L

from ..errors import DomainError
from . import interval as I
from .interval import GUARD_BITS, Interval, working_precision

# Gamma is decreasing left of this point and increasing right of it.
_GAMMA_ARGMIN_LO = Fraction("1.4616321449683622")
_GAMMA_ARGMIN_HI = Fraction("1.4616321449683624")
# Rational lower bound for the minimum value 0.88560319441088870027...
_GAMMA_MIN_LO = Fraction("0.8856031944108887002788159005")


@lru_cache(maxsize=None)
def _bernoulli(n: int) -> Fraction:
    q = mpmath.bernfrac(n)
    return Fraction(int(q[0]), int(q[1]))


def _round_out(x: Interval, bits: int) -> Interval:
    a = L.mpf_pos(x.raw[0], bits, L.round_floor)
    b = L.mpf_pos(x.raw[1], bits, L.round_ceiling)
    return Interval._raw(a, b)


def _log_gamma_stirling(y: Interval, wp: int) -> Interval:
    """log Gamma(y) for a point y large enough that the series reaches 2^-wp."""
    half = Fraction(1, 2)
    acc = (y - half) * I.log(y) - y + I.log(I.pi() * 2) / 2
    inv = 1 / y
    inv2 = inv * inv
    power = inv
    target = Interval(Fraction(1, 2 ** (wp + 4)))
    k = 1
    while True:
        b = _bernoulli(2 * k)
        term = power * Fraction(b, 2 * k * (2 * k - 1))
        # the first omitted term bounds the remainder for real y > 0
        nb = abs(_bernoulli(2 * k + 2))
        rem = power * inv2 * Fraction(nb, (2 * k + 2) * (2 * k + 1))
        acc = acc + term
        if rem.certainly_lt(target) or k > 4 * wp:
            return acc + Interval(-rem.hi, rem.hi)
        power = power * inv2
        k += 1


def _gamma_point(x_raw, wp: int) -> Interval:
    x = Interval._raw(x_raw, x_raw)
    shift_to = max(12, (wp * 3) // 20)
    xv = mpmath.mpf(x.lo)
    k = max(0, int(mpmath.ceil(shift_to - xv)))
    y = x + k
    lg = _log_gamma_stirling(y, wp)
    g = I.exp(lg)
    if k:
        prod = x
        for j in range(1, k):
            prod = prod * (x + j)
        g = g / prod
    return g


def gamma_interval(x, prec=None) -> Interval:
    """Enclosure of Gamma(x) for an interval of positive reals."""
    with working_precision(prec) as p:
        x = I.iv(x)
        if not x.certainly_positive():
            raise DomainError("gamma_interval needs x.lo > 0")
        if not x.is_finite():
            raise DomainError("gamma_interval needs a bounded argument")
        wp = p.bits + GUARD_BITS
        with working_precision(wp):
            lo_pt = _gamma_point(x.raw[0], wp)
            hi_pt = lo_pt if x.is_point() else _gamma_point(x.raw[1], wp)
            if x.certainly_ge(_GAMMA_ARGMIN_HI):
                out = Interval(lo_pt.lo, hi_pt.hi)
            elif x.certainly_le(_GAMMA_ARGMIN_LO):
                out = Interval(hi_pt.lo, lo_pt.hi)
            else:
                top = I.imax(lo_pt, hi_pt)
                out = Interval(Interval(_GAMMA_MIN_LO).lo, top.hi)
        return _round_out(out, p.bits)


def robbins_sides(k: int, prec=None):
    """The two Robbins bounds on k!, as (lower, upper) enclosures.

    sqrt(2 pi k) (k/e)^k exp(1/(12k+1)) < k! < sqrt(2 pi k) (k/e)^k exp(1/(12k)).
    """
    if int(k) != k or k < 1:
        raise DomainError("Robbins bounds need an integer k >= 1")
    k = int(k)
    with working_precision(prec):
        base = I.sqrt(I.pi() * 2 * k) * I.exp(I.log(Interval(k)) * k - k)
        lower = base * I.exp(Interval(Fraction(1, 12 * k + 1)))
        upper = base * I.exp(Interval(Fraction(1, 12 * k)))
        return lower, upper


def robbins_factorial(k: int, prec=None) -> Interval:
    """Enclosure of k! from the Robbins sandwich."""
    lower, upper = robbins_sides(k, prec)
    return Interval(lower.lo, upper.hi)


def wendel_gap(x, s, prec=None) -> Interval:
    """x^s Gamma(x) - Gamma(x + s), which is nonnegative for x > 0 and 0 < s < 1."""
    with working_precision(prec) as p:
        x, s = I.iv(x), I.iv(s)
        if not x.certainly_positive():
            raise DomainError("wendel_gap needs x > 0")
        if not (s.certainly_positive() and s.certainly_lt(1)):
            raise DomainError("wendel_gap needs 0 < s < 1")
        with working_precision(p.bits + GUARD_BITS):
            gap = I.ipow(x, s) * gamma_interval(x, p.bits + GUARD_BITS) - gamma_interval(
                x + s, p.bits + GUARD_BITS
            )
        return _round_out(gap, p.bits)


def sine_power_integral(k: int, theta) -> Interval:
    """Integral of sin(t)^k over [0, theta], by the reduction formula."""
    theta = I.iv(theta)
    s, c = I.sin(theta), I.cos(theta)
    if k % 2 == 0:
        w, start = theta, 0
    else:
        w, start = 1 - c, 1
    for j in range(start + 2, k + 1, 2):
        w = -(s ** (j - 1)) * c / j + w * Fraction(j - 1, j)
    return w


def sphere_measure(n: int, prec=None) -> Interval:
    """Surface measure of the unit sphere S^{n-1} in R^n."""
    if int(n) != n or n < 1:
        raise DomainError("dimension must be a positive integer")
    with working_precision(prec):
        half_n = Fraction(int(n), 2)
        return 2 * I.ipow(I.pi(), Interval(half_n)) / gamma_interval(Interval(half_n))


def cap_volume(n: int, theta, prec=None):
    """(measure of S^{n-1}, measure of a cap of angular radius theta).

    For n = 1 the cap consists of a single point and its measure is 1.
    """
    if int(n) != n or n < 1:
        raise DomainError("dimension must be a positive integer")
    n = int(n)
    with working_precision(prec) as p:
        theta = I.iv(theta)
        if not (theta.certainly_positive() and theta.certainly_lt(I.pi())):
            raise DomainError("cap angle must lie in (0, pi)")
        with working_precision(p.bits + GUARD_BITS):
            total = sphere_measure(n)
            if n == 1:
                cap = Interval(1)
            else:
                half = Fraction(n - 1, 2)
                factor = 2 * I.ipow(I.pi(), Interval(half)) / gamma_interval(Interval(half))
                cap = sine_power_integral(n - 2, theta) * factor
        return _round_out(total, p.bits), _round_out(cap, p.bits)
