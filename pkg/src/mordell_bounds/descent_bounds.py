"""Mordell-Weil rank bounds and the point-count bounds they feed.

Rank bounds come from 2-descent (in terms of S-class groups or of
discriminants) and from Remond's bound in terms of bad reduction.
Composing them with the rank-exponential count gives bounds that are far
too large for any fixed floating format, so those are carried as base-2
logarithms (:class:`LogBound`).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import MissingData, RangeError
from .mordell_counts import (
    CountQuery,
    _genus,
    crossover_holds,
    log_base,
    mordell_bound,
    sqrt_base,
)
from .numerics import interval as I
from .numerics.interval import Interval, working_precision
from .sphere_packing import integer_bound

RAW_LOG2_LIMIT = 1024


class Marked(str, enum.Enum):
    WEIERSTRASS = "weierstrass"
    NON_WEIERSTRASS = "non_weierstrass"


def _magnitude(x, name) -> Interval:
    x = I.iv(x)
    if x.certainly_lt(1):
        raise RangeError(f"{name} must be at least 1")
    return I.imax(x, 1)


@dataclass(frozen=True)
class CurveParams:
    """Arithmetic invariants of a curve over a number field K of degree d.

    abs_disc_K is |Delta_K|, N0 the product of the norms of the primes of bad
    reduction and abs_norm_disc_f the absolute norm of the discriminant of the
    defining polynomial of a hyperelliptic model.
    """

    g: int
    d: int = 1
    abs_disc_K: Interval = 1
    N0: Interval = 1
    abs_norm_disc_f: Optional[Interval] = None
    deg_f: Optional[int] = None
    S_size: Optional[int] = None
    cl2_dims: Optional[Sequence[int]] = None
    cl2_base: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "g", _genus(self.g))
        if isinstance(self.d, bool) or int(self.d) != self.d or self.d < 1:
            raise RangeError("degree d must be a positive integer")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "abs_disc_K", _magnitude(self.abs_disc_K, "abs_disc_K"))
        object.__setattr__(self, "N0", _magnitude(self.N0, "N0"))
        if self.abs_norm_disc_f is not None:
            object.__setattr__(self, "abs_norm_disc_f", _magnitude(self.abs_norm_disc_f, "abs_norm_disc_f"))
        if self.deg_f is not None and self.deg_f not in (2 * self.g + 1, 2 * self.g + 2):
            raise RangeError("deg_f must be 2g+1 or 2g+2")
        if self.cl2_dims is not None:
            object.__setattr__(self, "cl2_dims", tuple(int(v) for v in self.cl2_dims))


@dataclass(frozen=True)
class LogBound:
    """A positive bound represented by an enclosure of its base-2 logarithm."""

    log2: Interval
    detail: dict = field(default_factory=dict)

    @property
    def log10(self) -> Interval:
        return self.log2 * I.ln2() / I.log(Interval(10))

    @property
    def value(self) -> Optional[Interval]:
        """The bound itself, or None when log2 exceeds 1024."""
        if not self.log2.certainly_lt(RAW_LOG2_LIMIT):
            return None
        return I.exp2(self.log2)


def _log4(x) -> Interval:
    return I.log(x) / I.log(Interval(4))


# ---------------------------------------------------------------------------
# class groups and descent
# ---------------------------------------------------------------------------


def cl2_bound(d, abs_disc, prec=None) -> Interval:
    """#Cl(K)[2] <= 2^d d^(3d/2) |Delta_K|^(1/2)."""
    if isinstance(d, bool) or int(d) != d or d < 1:
        raise RangeError("degree d must be a positive integer")
    d = int(d)
    with working_precision(prec):
        disc = _magnitude(abs_disc, "abs_disc")
        d_pow = Interval(d**d) * I.sqrt(Interval(d**d)) if d > 1 else Interval(1)
        return (2**d) * d_pow * I.sqrt(disc)


def descent_general(g, S_size, cl2_dims, cl2_base, odd_degree_orbit=False) -> int:
    """2-descent rank bound from S-class group 2-ranks.

    Default: 1 + (2g+3)#S + sum dim Cl_S(L_i)[2] + dim Cl_S(K)[2].
    With some [L_i : K] odd: 2g #S + sum dim Cl_S(L_i)[2] - 2 dim Cl_S(K)[2].
    """
    g = _genus(g)
    dims = [int(v) for v in cl2_dims]
    for v in [S_size, cl2_base, *dims]:
        if isinstance(v, bool) or int(v) != v or v < 0:
            raise RangeError("descent inputs must be nonnegative integers")
    if odd_degree_orbit:
        return 2 * g * S_size + sum(dims) - 2 * cl2_base
    return 1 + (2 * g + 3) * S_size + sum(dims) + cl2_base


@dataclass(frozen=True)
class RankSplit:
    """rank <= sqrt_part + g * log_part, the split used to compose with the count bound."""

    sqrt_part: Interval
    log_part: Interval


def _hyperelliptic_terms(p: CurveParams):
    if p.deg_f is None:
        raise MissingData("deg_f is required")
    if p.abs_norm_disc_f is None:
        raise MissingData("abs_norm_disc_f is required")
    g, d = p.g, p.d
    a = I.log2(p.abs_norm_disc_f)
    b = I.log2(p.abs_disc_K)
    if p.deg_f == 2 * g + 1:
        L = I.log2(Interval(2 * g * d + d))
        sqrt_part = a / 2 + b / 2 + Fraction(3, 2) * d * L + d
    else:
        L = I.log2(Interval(2 * g * d + 2 * d))
        sqrt_part = Fraction(5, 2) * a + Fraction(3, 2) * b + Fraction(9, 2) * d * L + 6 * d + 1
    log_part = Fraction(4, 3) * a + b + 3 * d * L + 6 * d
    return RankSplit(sqrt_part, log_part)


def rank_bound_hyperelliptic(p: CurveParams, prec=None) -> Interval:
    """Rank bound for y^2 = f(x) with f monic square-free.

    deg f = 2g+1: (4g/3 + 1/2) log2|N Delta_f| + (g + 1/2) log2|Delta_K|
                  + (3g + 3/2) d log2(2gd + d) + (6g + 1) d.
    deg f = 2g+2: (4g/3 + 5/2) log2|N Delta_f| + (g + 3/2) log2|Delta_K|
                  + (3g + 9/2) d log2(2gd + 2d) + (6g + 6) d + 1.
    """
    if p.deg_f is None:
        raise MissingData("deg_f is required")
    if p.abs_norm_disc_f is None:
        raise MissingData("abs_norm_disc_f is required")
    g, d = p.g, p.d
    with working_precision(prec):
        a = I.log2(p.abs_norm_disc_f)
        b = I.log2(p.abs_disc_K)
        if p.deg_f == 2 * g + 1:
            L = I.log2(Interval(2 * g * d + d))
            return (
                (Fraction(4 * g, 3) + Fraction(1, 2)) * a
                + (g + Fraction(1, 2)) * b
                + (3 * g + Fraction(3, 2)) * d * L
                + (6 * g + 1) * d
            )
        L = I.log2(Interval(2 * g * d + 2 * d))
        return (
            (Fraction(4 * g, 3) + Fraction(5, 2)) * a
            + (g + Fraction(3, 2)) * b
            + (3 * g + Fraction(9, 2)) * d * L
            + (6 * g + 6) * d
            + 1
        )


def rank_split(p: CurveParams, prec=None) -> RankSplit:
    with working_precision(prec):
        return _hyperelliptic_terms(p)


def remond_rank(p: CurveParams, prec=None) -> Interval:
    """rk J(K) <= (g d 2^(8g^2) / log 4) (4 d g^2 log N0 + log|Delta_K| + g^2 d^2 log 16) - 1."""
    g, d = p.g, p.d
    with working_precision(prec):
        lead = Interval(g * d * 2 ** (8 * g * g))
        inner = 4 * d * g * g * _log4(p.N0) + _log4(p.abs_disc_K) + 2 * g * g * d * d
        return lead * inner - 1


# ---------------------------------------------------------------------------
# count bounds
# ---------------------------------------------------------------------------


def vojta_base(g, prec=None) -> Interval:
    """min{1 + 5/(4 sqrt g), 1 + 3 log g / g}."""
    with working_precision(prec):
        return log_base(g) if crossover_holds(g) else sqrt_base(g)


@dataclass(frozen=True)
class BadReductionBound(LogBound):
    c1_log2: Interval = None
    c2: Interval = None
    c3: Interval = None
    checks: dict = field(default_factory=dict)


def bad_reduction_bound(p: CurveParams, prec=None) -> BadReductionBound:
    """#C(K) <= c1 N0^c2 |Delta_K|^c3 with

    c1 = 1e13 g^8 m^(2 g^3 d^3 2^(8g^2)),  c2 = 4 g^3 d^2 2^(8g^2) log_4 m,
    c3 = g d 2^(8g^2) log_4 m,  m = min{1 + 5/(4 sqrt g), 1 + 3 log g / g}.
    """
    g, d = p.g, p.d
    with working_precision(prec):
        m = vojta_base(g)
        big = Interval(2 ** (8 * g * g))
        log4m = _log4(m)
        log2g = I.log2(Interval(g))
        log2_1e13 = I.log2(Interval(10**13))
        c1_log2 = log2_1e13 + 8 * log2g + 2 * g**3 * d**3 * big * I.log2(m)
        c2 = 4 * g**3 * d * d * big * log4m
        c3 = g * d * big * log4m
        total = c1_log2 + c2 * I.log2(p.N0) + c3 * I.log2(p.abs_disc_K)
        lng = I.log(Interval(g))
        checks = {
            "c1_simplified": c1_log2.certainly_lt(log2_1e13 + (6 * g * g * d**3 * big + 8) * log2g),
            "c2_simplified": c2.certainly_lt(Fraction(87, 10) * g * g * d * d * big * lng),
            "c3_simplified": c3.certainly_lt(Fraction(22, 10) * d * big * lng),
            "c2_over_c3": (c2 / c3).contains(4 * g * g * d),
        }
        return BadReductionBound(total, c1_log2=c1_log2, c2=c2, c3=c3, checks=checks)


def hyperelliptic_count_bound(p: CurveParams, prec=None) -> LogBound:
    """Bound for #{(x, y) in K^2 : y^2 = f(x)}.

    deg f = 2g+1: 1e13 2^d g^(9d log2(2gd+d) + 18d + 8) (2gd+d)^(3d/2)
                  |N Delta_f|^(4 log2 g + 1/2) |Delta_K|^(3 log2 g + 1/2).
    deg f = 2g+2: 1e13 2^(6d+1) g^(9d log2(2gd+2d) + 18d + 8) (2gd+2d)^(9d/2)
                  |N Delta_f|^(4 log2 g + 5/2) |Delta_K|^(3 log2 g + 3/2).
    """
    if p.deg_f is None:
        raise MissingData("deg_f is required")
    if p.abs_norm_disc_f is None:
        raise MissingData("abs_norm_disc_f is required")
    g, d = p.g, p.d
    with working_precision(prec):
        lg = I.log2(Interval(g))
        a = I.log2(p.abs_norm_disc_f)
        b = I.log2(p.abs_disc_K)
        if p.deg_f == 2 * g + 1:
            L = I.log2(Interval(2 * g * d + d))
            total = (
                I.log2(Interval(10**13))
                + d
                + (9 * d * L + 18 * d + 8) * lg
                + Fraction(3, 2) * d * L
                + (4 * lg + Fraction(1, 2)) * a
                + (3 * lg + Fraction(1, 2)) * b
            )
        else:
            L = I.log2(Interval(2 * g * d + 2 * d))
            total = (
                I.log2(Interval(10**13))
                + 6 * d
                + 1
                + (9 * d * L + 18 * d + 8) * lg
                + Fraction(9, 2) * d * L
                + (4 * lg + Fraction(5, 2)) * a
                + (3 * lg + Fraction(3, 2)) * b
            )
        return LogBound(total)


# exponents in the count bound as (constant, coefficient of log2 g), per input term
_STATED_EXPONENTS = {
    "odd": {
        "norm_disc": (Fraction(1, 2), Fraction(4)),
        "disc_K": (Fraction(1, 2), Fraction(3)),
        "d_log": (Fraction(3, 2), Fraction(9)),
        "d": (Fraction(1), Fraction(18)),
        "one": (Fraction(0), Fraction(8)),
    },
    "even": {
        "norm_disc": (Fraction(5, 2), Fraction(4)),
        "disc_K": (Fraction(3, 2), Fraction(3)),
        "d_log": (Fraction(9, 2), Fraction(9)),
        "d": (Fraction(6), Fraction(18)),
        "one": (Fraction(1), Fraction(8)),
    },
}

# the rank bound split as sqrt part + g * log part, coefficient per term
_RANK_SPLIT = {
    "odd": {
        "norm_disc": (Fraction(1, 2), Fraction(4, 3)),
        "disc_K": (Fraction(1, 2), Fraction(1)),
        "d_log": (Fraction(3, 2), Fraction(3)),
        "d": (Fraction(1), Fraction(6)),
        "one": (Fraction(0), Fraction(0)),
    },
    "even": {
        "norm_disc": (Fraction(5, 2), Fraction(4, 3)),
        "disc_K": (Fraction(3, 2), Fraction(1)),
        "d_log": (Fraction(9, 2), Fraction(3)),
        "d": (Fraction(6), Fraction(6)),
        "one": (Fraction(1), Fraction(0)),
    },
}

def composition_exponents(kind: str) -> dict:
    """Exponents of the count bound derived from the rank bound.

    With rank <= R1 + g R2, min{...}^rank <= 2^R1 (g^3)^R2 since the first base
    is below 2 and the g-th power of the second is below g^3.  Each term's
    exponent becomes (coefficient in R1) + 3 (coefficient in R2) log2 g; the
    constant term also picks up g^8 from the count bound.
    """
    out = {}
    for term, (c1, c2) in _RANK_SPLIT[kind].items():
        extra = Fraction(8) if term == "one" else Fraction(0)
        out[term] = (c1, 3 * c2 + extra)
    return out


def composition_check(p: CurveParams, prec=None) -> dict:
    """Re-derive the hyperelliptic count bound from the rank bound and the count bound."""
    if p.deg_f is None:
        raise MissingData("deg_f is required")
    kind = "odd" if p.deg_f == 2 * p.g + 1 else "even"
    g = p.g
    with working_precision(prec):
        split = rank_split(p)
        rank = rank_bound_hyperelliptic(p)
        stated = hyperelliptic_count_bound(p).log2
        rank_floor = integer_bound(rank)
        via_mordell = I.log2(mordell_bound(CountQuery(g, rank_floor)).value)
        via_split = (
            I.log2(Interval(10**13))
            + 8 * I.log2(Interval(g))
            + split.sqrt_part
            + 3 * split.log_part * I.log2(Interval(g))
        )
        return {
            "split_sums_to_rank": (split.sqrt_part + g * split.log_part).overlaps(rank),
            "exponents_match": composition_exponents(kind) == _STATED_EXPONENTS[kind],
            "sqrt_base_below_two": sqrt_base(g).certainly_lt(2),
            "log_base_power_below_g_cubed": I.ipow(log_base(g), g).certainly_le(Fraction(g) ** 3),
            "mordell_le_split": via_mordell.certainly_le(via_split),
            "split_matches_stated": via_split.overlaps(stated),
            "mordell_le_stated": via_mordell.certainly_le(stated),
        }


def average_bounds(g, marked=Marked.WEIERSTRASS, prec=None) -> Interval:
    """Average number of rational points: 3e13 g^8 (Weierstrass mark) or 6e13 g^8."""
    g = _genus(g)
    marked = Marked(marked)
    with working_precision(prec):
        if not sqrt_base(g).certainly_lt(2):
            raise RangeError("1 + 5/(4 sqrt g) < 2 could not be certified")
        factor = 3 if marked is Marked.WEIERSTRASS else 6
        return Interval(factor * 10**13 * g**8)
