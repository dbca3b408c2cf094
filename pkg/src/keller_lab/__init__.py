"""Exact-arithmetic tools for Keller-type polynomial maps.

Everything in this package computes over the rationals with no rounding:
polynomial arithmetic, Jacobian determinants, structured map families and
their inverses and factorizations, and injectivity certificates on convex
domains.
"""

from keller_lab._kernels import IMPLEMENTATION as KERNEL_IMPLEMENTATION
from keller_lab.poly import Monomial, Poly, PolyMap, Rational, coordinate_sum

__all__ = [
    "KERNEL_IMPLEMENTATION",
    "Monomial",
    "Poly",
    "PolyMap",
    "Rational",
    "coordinate_sum",
]

__version__ = "0.1.0"
