"""Certified evaluation of explicit bounds for rational points on curves."""

from .numerics import Interval, Precision

__version__ = "0.1.0"

__all__ = ["Interval", "Precision", "__version__"]
