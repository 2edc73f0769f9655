"""Upper bounds for A(n, theta), the largest number of unit vectors in R^n
with pairwise angles at least theta, and a randomized greedy lower bound.

Three upper bounds are implemented: cap-volume comparison, Rankin's bound
(with the simplex bound n + 1 for obtuse angles) and the
Kabatjanskii-Levenshtein bound, which needs certified enclosures of the
largest root of a Gegenbauer polynomial.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .errors import CertificationFailed, DomainError, HypothesisUnverified, RangeError
from .numerics import interval as I
from .numerics.interval import GUARD_BITS, Interval, as_precision, working_precision
from .numerics.special import cap_volume


class Method(str, enum.Enum):
    CAP_VOLUME = "cap_volume"
    RANKIN = "rankin"
    KL = "kl"
    BEST = "best"


@dataclass(frozen=True)
class PackingQuery:
    """Dimension, minimum pairwise angle and the bound to use."""

    n: int
    theta: Interval
    method: Method = Method.BEST

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError("dimension n must be a positive integer")
        theta = I.iv(self.theta)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "method", Method(self.method))
        if not theta.certainly_positive() or theta.certainly_gt(I.pi()):
            raise DomainError("theta must lie in (0, pi]")


@dataclass(frozen=True)
class GegenbauerIndex:
    """Index (n, m) of the polynomial solution of
    (1 - x^2) f'' - (n - 1) x f' + m (m + n - 2) f = 0."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 2 or self.m < 0:
            raise DomainError("Gegenbauer index needs n >= 2 and m >= 0")

    @property
    def q(self) -> int:
        return (2 * self.m + self.n - 1) * (2 * self.m + self.n - 3)

    @property
    def p(self) -> int:
        return self.q - (self.n - 1) * (self.n - 5)


@dataclass(frozen=True)
class BoundResult:
    value: Interval
    method: str
    detail: dict = field(default_factory=dict)

    @property
    def integer(self) -> int:
        return integer_bound(self.value)


def integer_bound(value: Interval) -> int:
    """The integer bound implied by an enclosure of a real upper bound."""
    if not value.is_finite():
        raise DomainError("unbounded enclosure has no integer bound")
    return value.floor_bounds()[1]


# -- cap volume --------------------------------------------------------------


def cap_volume_bound(q: PackingQuery, prec=None) -> Interval:
    """vol(S^{n-1}) / vol(cap(theta/2))."""
    if q.n < 2:
        raise DomainError("the cap-volume bound needs n >= 2")
    with working_precision(prec) as p:
        total, cap = cap_volume(q.n, q.theta / 2, p.bits + GUARD_BITS)
        with working_precision(p.bits + GUARD_BITS):
            return total / cap


# -- Rankin --------------------------------------------------------------------


def _rankin_formula(n, cos_t):
    if not cos_t.certainly_positive():
        raise DomainError("Rankin's formula needs cos(theta) > 0")
    root = I.sqrt(cos_t)
    half = Fraction(n - 1, 2)
    return (1 + root) * I.ipow(Interval(n), Interval(Fraction(3, 2))) / (
        root * I.ipow(1 - cos_t, Interval(half))
    )


@lru_cache(maxsize=None)
def _rankin_argmin(n: int) -> Fraction:
    """Approximate minimiser over c in (0, 1) of (1 + sqrt c) / (sqrt c (1 - c)^((n-1)/2)).

    The logarithmic derivative vanishes where (n - 1) c (1 + sqrt c) = 1 - c;
    left of that point the formula decreases, right of it it increases.
    """
    lo, hi = 0.0, 1.0
    for _ in range(80):
        c = (lo + hi) / 2
        if (n - 1) * c * (1 + math.sqrt(c)) < 1 - c:
            lo = c
        else:
            hi = c
    return Fraction(lo)


def rankin_bound(q: PackingQuery, prec=None) -> Interval:
    """Rankin's bound, with A(1, theta) = 2 and A(n, theta) <= n + 1 for theta > pi/2.

    The closed formula grows again as cos(theta) approaches 0.  Since A is
    nonincreasing in theta, the cosine is clipped from below at the
    formula's minimiser, which keeps the bound monotone.  An interval straddling pi/2 gets the larger
    of that value and n + 1.
    """
    n = q.n
    if n == 1:
        return Interval(2)
    with working_precision(prec):
        half_pi = I.pi() / 2
        theta = q.theta
        if theta.certainly_gt(half_pi):
            return Interval(n + 1)
        # g(max(c, c_star)) is the monotone envelope of the formula g(c)
        value = _rankin_formula(n, I.imax(I.cos(theta), Interval(_rankin_argmin(n))))
        if theta.certainly_le(half_pi):
            return value
        return I.imax(value, Interval(n + 1))


# -- Gegenbauer roots ------------------------------------------------------------


@lru_cache(maxsize=None)
def _gammas(n: int, m: int):
    """Monic three-term recurrence coefficients p_{k+1} = x p_k - gamma_k p_{k-1}."""
    lam = Fraction(n - 2, 2)
    out = [Fraction(0)]
    for k in range(1, m):
        if lam == 0 and k == 1:
            out.append(Fraction(1, 2))
        else:
            out.append(Fraction(k) * (k + 2 * lam - 1) / (4 * (k + lam) * (k + lam - 1)))
    return tuple(out)


def _estimate_largest_root(n: int, m: int) -> float:
    """Largest eigenvalue of the symmetric Jacobi matrix, in double precision."""
    g = _gammas(n, m)
    off = np.sqrt(np.array([float(v) for v in g[1:m]], dtype=float))
    jac = np.diag(off, 1) + np.diag(off, -1)
    return float(np.linalg.eigvalsh(jac)[-1])


def _polish(n, m, x0, wp):
    """Newton steps on the monic polynomial, in mpmath at wp bits."""
    g = [mpmath.mpf(v.numerator) / v.denominator for v in _gammas(n, m)]
    x = mpmath.mpf(x0)
    for _ in range(wp):
        p_prev, p = mpmath.mpf(0), mpmath.mpf(1)
        d_prev, d = mpmath.mpf(0), mpmath.mpf(0)
        for k in range(m):
            gk = g[k] if k else 0
            p_next = x * p - gk * p_prev
            d_next = p + x * d - gk * d_prev
            p_prev, p = p, p_next
            d_prev, d = d, d_next
        if d == 0:
            break
        step = p / d
        x -= step
        if abs(step) < mpmath.mpf(2) ** (-wp):
            break
    return x


def sturm_sign_changes(idx: GegenbauerIndex, x) -> int | None:
    """Sign changes of p_0(x), ..., p_m(x); equals the number of roots of p_m above x.

    Returns None when some p_k(x) cannot be given a certified sign.
    """
    n, m = idx.n, idx.m
    g = _gammas(n, max(m, 1))
    x = I.iv(x)
    p_prev, p = Interval(0), Interval(1)
    signs = [1]
    for k in range(m):
        gk = g[k] if k else 0
        p_prev, p = p, x * p - p_prev * gk
        if p.certainly_positive():
            signs.append(1)
        elif p.certainly_negative():
            signs.append(-1)
        else:
            return None
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def gegenbauer_largest_root(idx: GegenbauerIndex, prec=None) -> Interval:
    """Certified enclosure of the largest root x_(n,m) of the Gegenbauer polynomial."""
    n, m = idx.n, idx.m
    if m < 1:
        raise DomainError("the polynomial of degree 0 has no roots")
    if m == 1:
        return Interval(0)
    p = as_precision(prec)
    wp = p.bits + GUARD_BITS
    estimate = _estimate_largest_root(n, m)
    with mpmath.workprec(wp):
        centre = _polish(n, m, estimate, wp)
        if abs(centre - estimate) > 1e-6:
            raise CertificationFailed(
                f"Newton refinement moved the eigenvalue estimate for (n={n}, m={m})"
            )
        with working_precision(wp):
            for shift in range(0, 64, 8):
                delta = mpmath.mpf(2) ** (-(3 * p.bits) // 4 + shift)
                x_lo, x_hi = centre - delta, centre + delta
                above_hi = sturm_sign_changes(idx, Interval(x_hi))
                above_lo = sturm_sign_changes(idx, Interval(x_lo))
                if above_hi is None or above_lo is None:
                    continue
                if above_hi == 0 and above_lo == 1:
                    return Interval(x_lo, x_hi)
                raise CertificationFailed(
                    f"Sturm count ({above_lo}, {above_hi}) disagrees with the eigenvalue "
                    f"estimate for (n={n}, m={m})"
                )
    raise CertificationFailed(f"could not separate the largest root for (n={n}, m={m})")


def trivial_root_bound(idx: GegenbauerIndex, prec=None) -> Interval:
    """sqrt(p/q), an upper bound for x_(n,m) when n >= 6."""
    if idx.n < 6:
        raise DomainError("the bound sqrt(p/q) is stated for n >= 6")
    with working_precision(prec):
        return I.sqrt(Interval(Fraction(idx.p, idx.q)))


# -- Kabatjanskii-Levenshtein -----------------------------------------------------


def _kl_value(n, m, prec):
    upper_root = gegenbauer_largest_root(GegenbauerIndex(n, m + 1), prec)
    with working_precision(prec):
        return 4 * Interval(math.comb(m + n - 2, n - 2)) / (1 - upper_root)


def kl_bound(q: PackingQuery, m: int, prec=None) -> Interval:
    """4 C(m+n-2, n-2) / (1 - x_(n,m+1)), valid when cos(theta) <= x_(n,m)."""
    if q.n < 2:
        raise DomainError("the KL bound needs n >= 2")
    if m < 1:
        raise DomainError("the KL bound needs m >= 1")
    p = as_precision(prec)
    with working_precision(p):
        cos_t = I.cos(q.theta)
        root = gegenbauer_largest_root(GegenbauerIndex(q.n, m), p)
        if not cos_t.certainly_le(root):
            raise HypothesisUnverified(
                f"cannot certify cos(theta) <= x_(n,m) for n={q.n}, m={m}"
            )
        return _kl_value(q.n, m, p)


def kl_smallest_degree(q: PackingQuery, prec=None, max_m: int = 200):
    """Smallest m for which the KL hypothesis is certified, or None."""
    p = as_precision(prec)
    with working_precision(p):
        cos_t = I.cos(q.theta)
        for m in range(1, max_m + 1):
            root = gegenbauer_largest_root(GegenbauerIndex(q.n, m), p)
            if cos_t.certainly_le(root):
                return m
            if cos_t.certainly_ge(1):
                return None
    return None


# -- combined ----------------------------------------------------------------------


def packing_bound(q: PackingQuery, prec=None) -> BoundResult:
    """Evaluate the method named in the query; BEST returns the tightest applicable one."""
    p = as_precision(prec)
    if q.method is Method.CAP_VOLUME:
        return BoundResult(cap_volume_bound(q, p), Method.CAP_VOLUME.value)
    if q.method is Method.RANKIN:
        return BoundResult(rankin_bound(q, p), Method.RANKIN.value)
    if q.method is Method.KL:
        m = kl_smallest_degree(q, p)
        if m is None:
            raise HypothesisUnverified("no degree m certifies the KL hypothesis")
        return BoundResult(kl_bound(q, m, p), Method.KL.value, {"m": m})
    candidates = []
    if q.n == 1:
        return BoundResult(Interval(2), Method.RANKIN.value)
    candidates.append(BoundResult(cap_volume_bound(q, p), Method.CAP_VOLUME.value))
    try:
        candidates.append(BoundResult(rankin_bound(q, p), Method.RANKIN.value))
    except DomainError:
        pass
    m = kl_smallest_degree(q, p)
    if m is not None:
        candidates.append(BoundResult(kl_bound(q, m, p), Method.KL.value, {"m": m}))
    best = min(candidates, key=lambda r: r.value.hi)
    others = {r.method: str(r.value) for r in candidates}
    return BoundResult(best.value, best.method, {**best.detail, "candidates": others})


# -- refined bound for large genus --------------------------------------------------


@dataclass(frozen=True)
class RefinedBound:
    n: int
    g: int
    m: int
    binomial_form: int
    closed_form: Interval
    kl_value: Interval
    value: Interval
    checks: dict


def _certified_ceil(x: Interval) -> int:
    lo, hi = x.floor_bounds()
    if lo != hi:
        raise CertificationFailed("ceiling of an interval straddling an integer")
    if x.contains(lo) and x.is_point():
        return lo
    if x.contains(lo):
        raise CertificationFailed("cannot decide the ceiling of an interval touching an integer")
    return lo + 1


def refined_angles(g: int, prec=None):
    """(cos theta, cos beta, sin beta) for cos theta = sqrt(1.01/g), cos beta = sqrt(10.7/g)."""
    with working_precision(prec):
        cos_theta = I.sqrt(Interval(Fraction(101, 100 * g)))
        cos_beta = I.sqrt(Interval(Fraction(107, 10 * g)))
        sin_beta = I.sqrt(Interval(1 - Fraction(107, 10 * g)))
        return cos_theta, cos_beta, sin_beta


def refined_degree(n: int, g: int, prec=None) -> int:
    """m = ceil((1 - sin beta) / (2 sin beta) * n)."""
    with working_precision(prec):
        _, _, sin_beta = refined_angles(g)
        return _certified_ceil((1 - sin_beta) / (2 * sin_beta) * n)


def refined_A_bound(n: int, g: int, prec=None) -> RefinedBound:
    """Certified refinement of the KL bound at cos theta = sqrt(1.01/g), for g >= 142, n >= 2g."""
    if g < 142:
        raise RangeError("the refined bound needs g >= 142")
    if n < 2 * g:
        raise RangeError("the refined bound needs n >= 2g")
    p = as_precision(prec)
    with working_precision(p):
        cos_theta, cos_beta, sin_beta = refined_angles(g)
        m = refined_degree(n, g)
        checks = {}
        root_m = gegenbauer_largest_root(GegenbauerIndex(n, m), p)
        checks["cos_theta_le_root"] = cos_theta.certainly_le(root_m)
        root_next = gegenbauer_largest_root(GegenbauerIndex(n, m + 1), p)
        checks["next_root_below_one_third"] = root_next.certainly_lt(Fraction(1, 3))
        ratio = Fraction((n - 1) * (n - 5), (2 * m + n + 1) * (2 * m + n - 1))
        checks["ratio_at_least_0.89"] = ratio >= Fraction(89, 100)
        lhs = (Fraction(107, 10) - ((2 * I.sqrt(Interval(Fraction(107, 10))) + I.sqrt(Interval(Fraction(101, 100)))) / 3) ** 2) * 4
        rhs = 9 * I.pi() ** 2 / (I.sqrt(Interval(Fraction(107, 10))) - I.sqrt(Interval(Fraction(101, 100)))) ** 2
        checks["comparison_constant"] = lhs.certainly_gt(rhs)
        if not checks["cos_theta_le_root"]:
            raise HypothesisUnverified("cannot certify cos(theta) <= x_(n,m)")
        binom = math.comb(m + n - 2, n - 2)
        kl_value = 4 * Interval(binom) / (1 - root_next)
        checks["kl_le_six_binomial"] = kl_value.certainly_le(6 * binom)
        s = (1 - sin_beta) / (2 * sin_beta)
        closed = (
            6
            * I.euler_e()
            * I.ipow((1 + sin_beta) / (1 - sin_beta), s * n + 1)
            * I.ipow((1 + sin_beta) / (2 * sin_beta), n - 2)
        )
        checks["binomial_le_closed_form"] = Interval(6 * binom).certainly_le(closed)
        value = I.imin(Interval(6 * binom), closed)
        return RefinedBound(n, g, m, 6 * binom, closed, kl_value, value, checks)


@dataclass(frozen=True)
class BaseBound:
    g: int
    s: Interval
    base: Interval
    checks: dict


def base_from_s(s) -> Interval:
    """(1 + 1/s)^s (s + 1)."""
    s = I.iv(s)
    return I.ipow(1 + 1 / s, s) * (s + 1)


def kl_base_bound(g: int, prec=None) -> BaseBound:
    """The exponential base B of the refined count and its two stated upper bounds."""
    if g < 142:
        raise RangeError("the base bound needs g >= 142")
    with working_precision(prec):
        _, _, sin_beta = refined_angles(g)
        s = (1 - sin_beta) / (2 * sin_beta)
        base = base_from_s(s)
        logg_over_g = I.log(Interval(g)) / g
        checks = {
            "s_lt_2.84_over_g": s.certainly_lt(Interval(Fraction(284, 100 * g))),
            "log_base_lt_2.84_log_g_over_g": I.log(base).certainly_lt(logg_over_g * Fraction(284, 100)),
            "base_lt_quotient": base.certainly_lt(
                (1 + 3 * logg_over_g) / (1 + logg_over_g * Fraction(1, 100))
            ),
        }
        return BaseBound(g, s, base, checks)


def calc_bound(n, t, a, prec=None) -> Interval:
    """(t / (e log a))^t a^n - n^t, which is nonnegative for n, t > 0 and a > 1."""
    with working_precision(prec):
        n, t, a = I.iv(n), I.iv(t), I.iv(a)
        if not (n.certainly_positive() and t.certainly_positive() and a.certainly_gt(1)):
            raise DomainError("calc_bound needs n, t > 0 and a > 1")
        rhs = I.ipow(t / (I.euler_e() * I.log(a)), t) * I.ipow(a, n)
        return rhs - I.ipow(n, t)


# -- greedy lower bound ------------------------------------------------------------------

ANGLE_SLACK = 1e-12


def _structured_candidates(n: int, theta: float):
    vecs = []
    if n == 2:
        k = int(math.floor(2 * math.pi / theta + ANGLE_SLACK))
        vecs.extend((math.cos(2 * math.pi * j / k), math.sin(2 * math.pi * j / k)) for j in range(k))
    for i in range(n):
        for sign in (1.0, -1.0):
            v = [0.0] * n
            v[i] = sign
            vecs.append(tuple(v))
    return np.array(vecs, dtype=float).reshape(-1, n)


def _greedy_run(cands, cos_t, n):
    kept = np.empty((len(cands), n))
    count = 0
    for v in cands:
        if count == 0 or np.max(kept[:count] @ v) <= cos_t:
            kept[count] = v
            count += 1
    return count


def greedy_lower_bound(n: int, theta, trials: int, seed: int, restarts: int = 4) -> int:
    """Best greedy packing size over ``restarts`` runs sharing ``trials`` random candidates.

    Each run scans a few structured configurations (cross-polytope, and the
    regular polygon in the plane) followed by uniformly random unit vectors,
    keeping every vector at angle >= theta from those already kept.  Angles
    within 1e-12 of theta are accepted, so configurations attaining theta
    exactly are recognised despite rounding.  Randomness comes from numpy's
    counter-based Philox generator keyed by (seed, run).
    """
    theta = float(theta.mid()) if isinstance(theta, Interval) else float(theta)
    if n < 1:
        raise DomainError("dimension must be positive")
    if n == 1:
        return 2
    cos_t = math.cos(theta) + ANGLE_SLACK
    structured = _structured_candidates(n, theta)
    per_run = max(1, trials // max(1, restarts))
    best = 0
    for run in range(max(1, restarts)):
        rng = np.random.Generator(np.random.Philox(key=[seed, run]))
        raw = rng.standard_normal((per_run, n))
        raw /= np.linalg.norm(raw, axis=1, keepdims=True)
        cands = raw if run else np.vstack([structured, raw])
        best = max(best, _greedy_run(cands, cos_t, n))
    return best
