# cython: language_level=3
"""Compiled term-dict kernels.

Mirrors ``_purepoly`` exactly (same functions, same canonical dict in/out
contract) but runs the hot convolution loops in C and carries coefficients
as integer numerator/denominator pairs internally, turning most Fraction
dunder dispatch into plain big-int arithmetic.  Results are identical to
the pure kernels.
"""

from fractions import Fraction
from math import gcd

IMPLEMENTATION = "compiled"

_ZERO = Fraction(0)


def add_terms(dict a, dict b):
    """Return the term dict of a + b."""
    out = dict(a)
    for mono, coeff in b.items():
        s = out.get(mono, _ZERO) + coeff
        if s:
            out[mono] = s
        else:
            out.pop(mono, None)
    return out


def sub_terms(dict a, dict b):
    """Return the term dict of a - b."""
    out = dict(a)
    for mono, coeff in b.items():
        s = out.get(mono, _ZERO) - coeff
        if s:
            out[mono] = s
        else:
            out.pop(mono, None)
    return out


def scale_terms(c, dict a):
    """Return the term dict of c * a for a scalar c."""
    if not c:
        return {}
    return {mono: c * coeff for mono, coeff in a.items()}


def mul_terms(dict a, dict b):
    """Return the term dict of a * b (schoolbook convolution)."""
    cdef dict acc = {}
    cdef dict out = {}
    cdef Py_ssize_t i, width
    if not a or not b:
        return out
    if len(a) > len(b):  # iterate the smaller operand outside
        a, b = b, a
    for mono_a, coeff_a in a.items():
        na = coeff_a.numerator
        da = coeff_a.denominator
        width = len(mono_a)
        for mono_b, coeff_b in b.items():
            num = na * coeff_b.numerator
            den = da * coeff_b.denominator
            mono = tuple([mono_a[i] + mono_b[i] for i in range(width)])
            got = acc.get(mono)
            if got is None:
                acc[mono] = (num, den)
            else:
                onum = got[0]
                oden = got[1]
                num = onum * den + num * oden
                if num == 0:
                    del acc[mono]
                else:
                    den = oden * den
                    g = gcd(num, den)
                    if g > 1:
                        num //= g
                        den //= g
                    acc[mono] = (num, den)
    for mono, pair in acc.items():
        out[mono] = Fraction(pair[0], pair[1])
    return out


def pow_terms(dict a, k, n):
    """Return the term dict of a**k (k >= 0); n is the variable count.

    Iterated multiplication beats binary powering here: simplex-dense
    operands make big*small products cheaper than big*big squarings.
    """
    if k < 0:
        raise ValueError("negative exponent")
    cdef dict out = {(0,) * n: Fraction(1)}
    for _ in range(k):
        out = mul_terms(out, a)
    return out


def eval_terms(dict a, tuple point):
    """Evaluate the term dict at a point (exact)."""
    cdef list caches = [dict() for _ in point]
    cdef Py_ssize_t i
    acc_num = 0
    acc_den = 1
    for mono, coeff in a.items():
        num = coeff.numerator
        den = coeff.denominator
        for i in range(len(mono)):
            e = mono[i]
            if e:
                cache = <dict>caches[i]
                pair = cache.get(e)
                if pair is None:
                    base = point[i]
                    pair = (base.numerator ** e, base.denominator ** e)
                    cache[e] = pair
                num = num * pair[0]
                den = den * pair[1]
        acc_num = acc_num * den + num * acc_den
        acc_den = acc_den * den
        g = gcd(acc_num, acc_den)
        if g > 1:
            acc_num //= g
            acc_den //= g
    return Fraction(acc_num, acc_den)
