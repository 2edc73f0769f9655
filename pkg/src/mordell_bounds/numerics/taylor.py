"""Truncated Taylor series with interval coefficients.

A :class:`Taylor` value holds ``c[k] = f^(k)(x0) / k!`` for k up to a fixed
order, where x0 may itself be an interval.  Evaluating an integrand on
``Taylor.variable(X, n)`` for an interval X therefore encloses every
normalised derivative of the integrand over X, which is what the quadrature
remainder needs.  The elementary functions of :mod:`.interval` dispatch here
automatically, so integrands are written once as ordinary expressions.
"""

from __future__ import annotations

from . import interval as I
from .interval import Interval

_ZERO = None


def _zero():
    global _ZERO
    if _ZERO is None:
        _ZERO = Interval(0)
    return _ZERO


class Taylor:
    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = list(coeffs)

    @classmethod
    def variable(cls, x0, order):
        x0 = I.iv(x0)
        cs = [x0]
        if order >= 1:
            cs.append(Interval(1))
            cs.extend(_zero() for _ in range(order - 1))
        return cls(cs)

    @classmethod
    def constant(cls, x, order):
        return cls([I.iv(x)] + [_zero()] * order)

    @property
    def order(self):
        return len(self.c) - 1

    def _lift(self, other):
        if isinstance(other, Taylor):
            if other.order != self.order:
                raise ValueError("Taylor orders differ")
            return other
        try:
            return Taylor.constant(other, self.order)
        except TypeError:
            return None

    # -- arithmetic -----------------------------------------------------------

    def __neg__(self):
        return Taylor([-a for a in self.c])

    def __pos__(self):
        return self

    def __add__(self, other):
        if not isinstance(other, Taylor):
            try:
                o = I.iv(other)
            except TypeError:
                return NotImplemented
            return Taylor([self.c[0] + o] + self.c[1:])
        return Taylor([a + b for a, b in zip(self.c, other.c)])

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, Taylor) else -I.iv(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Taylor):
            try:
                o = I.iv(other)
            except TypeError:
                return NotImplemented
            return Taylor([a * o for a in self.c])
        a, b = self.c, other.c
        n = len(a)
        out = []
        for k in range(n):
            s = a[0] * b[k]
            for j in range(1, k + 1):
                s = s + a[j] * b[k - j]
            out.append(s)
        return Taylor(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Taylor):
            try:
                o = I.iv(other)
            except TypeError:
                return NotImplemented
            return Taylor([a / o for a in self.c])
        return _divide(self.c, other.c)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return _divide(o.c, self.c)

    def __pow__(self, other):
        return taylor_pow(self, other)

    def __rpow__(self, other):
        return I.exp(self * I.log(I.iv(other)))

    def square(self):
        return self * self

    def _taylor_apply(self, name):
        return _FUNCS[name](self)

    def __repr__(self):
        return f"Taylor({self.c!r})"


def _divide(a, b):
    b0 = b[0]
    out = []
    for k in range(len(a)):
        s = a[k]
        for j in range(1, k + 1):
            s = s - b[j] * out[k - j]
        out.append(s / b0)
    return Taylor(out)


def _integrate_derivative(a, g, f0):
    """Coefficients of f with f' = a' * g and f(x0) = f0."""
    n = len(a)
    out = [f0]
    for k in range(1, n):
        s = a[1] * g[k - 1]
        for j in range(2, k + 1):
            s = s + (a[j] * j) * g[k - j]
        out.append(s / k)
    return Taylor(out)


def _exp(x):
    a = x.c
    out = [I.exp(a[0])]
    for k in range(1, len(a)):
        s = (a[1]) * out[k - 1]
        for j in range(2, k + 1):
            s = s + (a[j] * j) * out[k - j]
        out.append(s / k)
    return Taylor(out)


def _log(x):
    a = x.c
    out = [I.log(a[0])]
    for k in range(1, len(a)):
        s = a[k]
        for j in range(1, k):
            s = s - (out[j] * j) * a[k - j] / k
        out.append(s / a[0])
    return Taylor(out)


def _sqrt(x):
    a = x.c
    s0 = I.sqrt(a[0])
    out = [s0]
    two_s0 = s0 * 2
    for k in range(1, len(a)):
        s = a[k]
        for j in range(1, k):
            s = s - out[j] * out[k - j]
        out.append(s / two_s0)
    return Taylor(out)


def _sin_cos(x, hyperbolic):
    a = x.c
    if hyperbolic:
        s, c = [I.sinh(a[0])], [I.cosh(a[0])]
    else:
        s, c = [I.sin(a[0])], [I.cos(a[0])]
    for k in range(1, len(a)):
        ss = a[1] * c[k - 1]
        cc = a[1] * s[k - 1]
        for j in range(2, k + 1):
            ss = ss + (a[j] * j) * c[k - j]
            cc = cc + (a[j] * j) * s[k - j]
        s.append(ss / k)
        c.append(cc / k if hyperbolic else -cc / k)
    return Taylor(s), Taylor(c)


def _sin(x):
    return _sin_cos(x, False)[0]


def _cos(x):
    return _sin_cos(x, False)[1]


def _tan(x):
    s, c = _sin_cos(x, False)
    return s / c


def _sinh(x):
    return _sin_cos(x, True)[0]


def _cosh(x):
    return _sin_cos(x, True)[1]


def _tanh(x):
    s, c = _sin_cos(x, True)
    return s / c


def _truncate(x, order):
    return Taylor(x.c[: order + 1])


def _inverse(x, f0, deriv):
    # g = deriv(a) only needs order n-1
    lower = _truncate(x, x.order - 1) if x.order >= 1 else x
    g = deriv(lower).c if x.order >= 1 else []
    return _integrate_derivative(x.c, g, f0)


def _atan(x):
    return _inverse(x, I.atan(x.c[0]), lambda a: 1 / (1 + a * a))


def _asin(x):
    return _inverse(x, I.asin(x.c[0]), lambda a: 1 / _sqrt(1 - a * a))


def _acos(x):
    return _inverse(x, I.acos(x.c[0]), lambda a: -1 / _sqrt(1 - a * a))


def _asinh(x):
    return _inverse(x, I.asinh(x.c[0]), lambda a: 1 / _sqrt(1 + a * a))


def _acosh(x):
    return _inverse(x, I.acosh(x.c[0]), lambda a: 1 / _sqrt(a * a - 1))


def _atanh(x):
    return _inverse(x, I.atanh(x.c[0]), lambda a: 1 / (1 - a * a))


def _int_pow(x, n):
    if n < 0:
        return 1 / _int_pow(x, -n)
    result = Taylor.constant(1, x.order)
    base = x
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def _real_pow(x, r):
    a = x.c
    out = [I.ipow(a[0], r)]
    for k in range(1, len(a)):
        s = None
        for j in range(1, k + 1):
            term = a[j] * out[k - j] * (r * j - (k - j))
            s = term if s is None else s + term
        out.append(s / (a[0] * k))
    return Taylor(out)


def taylor_pow(x, y):
    """x**y where either argument may be a Taylor series."""
    if isinstance(y, Taylor):
        return I.exp(y * I.log(x))
    if isinstance(y, int) and not isinstance(y, bool):
        return _int_pow(x, y)
    y = I.iv(y)
    if y.is_point() and y.is_finite():
        fy = y.fractions()[0]
        if fy.denominator == 1:
            return _int_pow(x, int(fy))
    return _real_pow(x, y)


_FUNCS = {
    "exp": _exp,
    "log": _log,
    "sqrt": _sqrt,
    "sin": _sin,
    "cos": _cos,
    "tan": _tan,
    "sinh": _sinh,
    "cosh": _cosh,
    "tanh": _tanh,
    "atan": _atan,
    "asin": _asin,
    "acos": _acos,
    "asinh": _asinh,
    "acosh": _acosh,
    "atanh": _atanh,
}
