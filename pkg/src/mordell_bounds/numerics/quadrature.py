"""Certified one-dimensional quadrature.

Each panel [m - r, m + r] is integrated with a Taylor polynomial of the
integrand about the exact dyadic midpoint m; the Lagrange remainder uses the
next Taylor coefficient enclosed over the whole panel, so

    integral in  sum_{k even} c_k 2 r^{k+1}/(k+1)  +  [-1, 1] |c_{N+1}(panel)| 2 r^{N+2}/(N+2).

Panels are bisected until their enclosure is narrow enough.
"""

from __future__ import annotations

from fractions import Fraction

from mpmath import libmp as L

from ..errors import DecayUnverifiable, DomainError, PrecisionExhausted
from . import interval as I
from .interval import Interval, as_precision, working_precision
from .taylor import Taylor

DEFAULT_ORDER = 16


def _as_taylor_coeffs(value, order):
    if isinstance(value, Taylor):
        return value.c
    return [I.iv(value)] + [Interval(0)] * order


def _panel(f, u, v, order):
    m = L.mpf_shift(L.mpf_add(u, v), -1)
    half = L.mpf_sub(v, m)
    r = Interval._raw(half, half)
    centre = _as_taylor_coeffs(f(Taylor.variable(Interval._raw(m, m), order)), order)
    whole = _as_taylor_coeffs(f(Taylor.variable(Interval._raw(u, v), order + 1)), order + 1)
    total = Interval(0)
    r_pow = r
    for k in range(order + 1):
        if k % 2 == 0:
            total = total + centre[k] * r_pow * Fraction(2, k + 1)
        r_pow = r_pow * r
    # r_pow is now r^(order + 2)
    bound = Interval(whole[order + 1].mag()) * r_pow * Fraction(2, order + 2)
    return total + Interval(-bound.hi, bound.hi)


def _accept(enc, length_frac, rel_tol, abs_tol):
    w = enc.width()
    return w <= rel_tol * enc.mig() or w <= abs_tol * length_frac


def _scale(f, a_raw, b_raw, samples=9):
    """Rough size of the integral, used to make the absolute tolerance relative."""
    a, b = Interval._raw(a_raw, a_raw), Interval._raw(b_raw, b_raw)
    span = b - a
    best = 0
    for j in range(samples):
        x = Interval((a + span * Fraction(j, samples - 1)).mid())
        try:
            best = max(best, I.iv(f(x)).mag())
        except DomainError:
            continue
    if best == 0:
        try:
            best = I.iv(f(Interval(a_raw, b_raw) if a_raw != b_raw else a)).mag()
        except DomainError:
            best = 1
    return best * span.mag()


def _integrate_points(f, a_raw, b_raw, prec, order, rel_tol, abs_tol):
    if L.mpf_cmp(a_raw, b_raw) == 0:
        return Interval(0)
    span = L.mpf_sub(b_raw, a_raw, 53, L.round_nearest)
    stack = [(a_raw, b_raw)]
    result = Interval(0)
    splits = 0
    while stack:
        u, v = stack.pop()
        frac = L.to_float(  # share of the whole range
            L.mpf_div(L.mpf_sub(v, u, 53, L.round_nearest), span, 53))
        try:
            enc = _panel(f, u, v, order)
            ok = _accept(enc, frac, rel_tol, abs_tol)
        except DomainError:
            enc, ok = None, False
        if ok:
            result = result + enc
            continue
        splits += 1
        if splits > prec.max_subdivisions:
            raise PrecisionExhausted(
                f"quadrature needed more than {prec.max_subdivisions} subdivisions"
            )
        m = L.mpf_shift(L.mpf_add(u, v), -1)
        if L.mpf_cmp(m, u) <= 0 or L.mpf_cmp(m, v) >= 0:
            raise PrecisionExhausted("panel cannot be bisected further")
        stack.append((m, v))
        stack.append((u, m))
    return result


def quad_certified(f, a, b, prec=None, *, order=DEFAULT_ORDER, rel_tol=None, abs_tol=None) -> Interval:
    """Enclosure of the integral of f over [a, b].

    ``f`` is called with Interval or Taylor arguments, so it must be written
    with arithmetic operators and the functions of :mod:`.interval`.
    Interval endpoints are allowed; their uncertainty is absorbed through
    f evaluated on the endpoint intervals.
    """
    p = as_precision(prec)
    with working_precision(p):
        a, b = I.iv(a), I.iv(b)
        if a.hi > b.lo:
            raise DomainError("quad_certified needs a.hi <= b.lo")
        rt = Interval(Fraction(1, 2 ** (p.bits // 2))).hi if rel_tol is None else rel_tol
        if abs_tol is None:
            at = rt * _scale(f, a.raw[1], b.raw[0])
        else:
            at = abs_tol
        core = _integrate_points(f, a.raw[1], b.raw[0], p, order, rt, at)
        if not a.is_point():
            core = core + Interval(0, a.width()) * I.iv(f(a))
        if not b.is_point():
            core = core + Interval(0, b.width()) * I.iv(f(b))
        return core


def gaussian_tail_bound(c, lam, cut) -> Interval:
    """Upper bound c e^{-lam cut^2} / (2 lam cut) for the integral of c e^{-lam s^2} over [cut, inf)."""
    c, lam, cut = I.iv(c), I.iv(lam), I.iv(cut)
    return c * I.exp(-lam * cut * cut) / (lam * cut * 2)


def quad_tail(f, a, prec=None, *, majorant, nonnegative=False, order=DEFAULT_ORDER, rel_tol=None) -> Interval:
    """Enclosure of the integral of f over [a, inf).

    ``majorant = (c, lam)`` declares |f(s)| <= c exp(-lam s^2) for s >= a.
    The integral is computed exactly up to a cutoff where the majorant's
    tail is below 2^-bits of its value at a; beyond it the majorant is
    integrated in closed form.  The premise is spot-checked past the cutoff.  Set ``nonnegative`` when f >= 0 is known, so
    the tail contributes only upward.  ``rel_tol`` is passed to
    :func:`quad_certified` for the body.
    """
    p = as_precision(prec)
    with working_precision(p):
        a = I.iv(a)
        c, lam = (I.iv(v) for v in majorant)
        if not lam.certainly_positive() or not c.certainly_nonnegative():
            raise DecayUnverifiable("majorant needs c >= 0 and lam > 0")
        a_pos = I.imax(a, Interval(0))
        shift = Interval((p.bits + 16)) * I.ln2() / lam
        cut_val = I.sqrt(a_pos * a_pos + shift)
        cut = Interval(cut_val.hi)
        if cut.certainly_lt(1):
            cut = Interval(1)
        cut = I.imax(cut, Interval(a.hi) + 1)
        cut = Interval(cut.hi)
        _check_majorant(f, c, lam, cut, order)
        body = quad_certified(f, a, cut, p, order=order, rel_tol=rel_tol)
        tail = gaussian_tail_bound(c, lam, cut)
        if nonnegative:
            return body + Interval(0, tail.hi)
        return body + Interval(-tail.hi, tail.hi)


def _check_majorant(f, c, lam, cut, order, samples=33):
    """Spot-check the declared majorant at points on [cut, 2 cut].

    Only a certified violation is reported; the caller remains responsible
    for the majorant holding everywhere past the cutoff.
    """
    step = cut / (samples - 1)
    for j in range(samples):
        s = Interval((cut + step * j).mid())
        try:
            val = I.iv(f(s))
        except DomainError as exc:
            raise DecayUnverifiable(f"integrand undefined past the cutoff: {exc}") from None
        bound = c * I.exp(-lam * s * s)
        if Interval(val.mig()).certainly_gt(bound):
            raise DecayUnverifiable("declared Gaussian majorant does not dominate the integrand")
