"""Exception hierarchy shared by every module of the package."""


class BoundsError(Exception):
    """Base class for all errors raised by mordell_bounds."""


class DomainError(BoundsError, ValueError):
    """An argument lies outside the domain of the requested function."""


class RangeError(BoundsError, ValueError):
    """A parameter violates the range a bound is stated for."""


class PrecisionExhausted(BoundsError):
    """The working precision or subdivision budget ran out before the tolerance was met."""


class DecayUnverifiable(BoundsError):
    """A declared Gaussian majorant could not be confirmed for an integrand."""


class CertificationFailed(BoundsError):
    """An interval computation disagreed with the floating-point estimate it was certifying."""


class HypothesisUnverified(BoundsError):
    """A hypothesis of a bound could not be certified at the current precision."""


class HypothesisFailed(BoundsError):
    """A hypothesis of a bound is certified to be false."""


class MissingData(BoundsError, KeyError):
    """An optional input needed by the requested bound was not supplied."""

    def __str__(self):
        return Exception.__str__(self)


class UnknownName(BoundsError, KeyError):
    """No registered bound carries the requested name."""

    def __str__(self):
        return Exception.__str__(self)


class UnknownClaim(BoundsError, KeyError):
    """The claim catalog has no entry with the requested id."""

    def __str__(self):
        return Exception.__str__(self)


class DimensionMismatch(BoundsError, ValueError):
    """Vectors or matrices of incompatible sizes were combined."""
