"""Interval arithmetic, special functions and certified quadrature."""

from .interval import (
    DEFAULT_BITS,
    ELEMENTARY,
    Interval,
    Precision,
    acos,
    acosh,
    as_precision,
    asin,
    asinh,
    atan,
    atanh,
    cos,
    cosh,
    current_bits,
    euler_e,
    exp,
    exp2,
    ieval_elementary,
    imax,
    imin,
    ipow,
    iv,
    ln2,
    log,
    log2,
    pi,
    sin,
    sinh,
    sqrt,
    tan,
    tanh,
    working_precision,
)
from .quadrature import gaussian_tail_bound, quad_certified, quad_tail
from .special import (
    cap_volume,
    gamma_interval,
    robbins_factorial,
    robbins_sides,
    sine_power_integral,
    sphere_measure,
    wendel_gap,
)
from .taylor import Taylor

__all__ = [name for name in dir() if not name.startswith("_")]
