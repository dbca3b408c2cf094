"""Pure-python term-dict kernels.

A term dict maps an exponent tuple (one non-negative int per variable) to a
nonzero Fraction coefficient.  The zero polynomial is the empty dict.  Every
kernel expects canonical inputs (no zero coefficients, keys of equal length)
and returns a canonical dict.  The compiled kernel in ``_fastpoly`` exposes
the same functions; ``keller_lab._kernels`` picks one at import time.
"""

from __future__ import annotations

from fractions import Fraction

IMPLEMENTATION = "pure"

_ZERO = Fraction(0)


def add_terms(a: dict, b: dict) -> dict:
    """Return the term dict of a + b."""
    out = dict(a)
    for mono, coeff in b.items():
        s = out.get(mono, _ZERO) + coeff
        if s:
            out[mono] = s
        else:
            out.pop(mono, None)
    return out


def sub_terms(a: dict, b: dict) -> dict:
    """Return the term dict of a - b."""
    out = dict(a)
    for mono, coeff in b.items():
        s = out.get(mono, _ZERO) - coeff
        if s:
            out[mono] = s
        else:
            out.pop(mono, None)
    return out


def scale_terms(c: Fraction, a: dict) -> dict:
    """Return the term dict of c * a for a scalar c."""
    if not c:
        return {}
    return {mono: c * coeff for mono, coeff in a.items()}


def mul_terms(a: dict, b: dict) -> dict:
    """Return the term dict of a * b (schoolbook convolution)."""
    if not a or not b:
        return {}
    if len(a) > len(b):  # iterate the smaller operand outside
        a, b = b, a
    out: dict = {}
    for mono_a, coeff_a in a.items():
        for mono_b, coeff_b in b.items():
            mono = tuple(x + y for x, y in zip(mono_a, mono_b))
            s = out.get(mono, _ZERO) + coeff_a * coeff_b
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
    return out


def pow_terms(a: dict, k: int, n: int) -> dict:
    """Return the term dict of a**k (k >= 0); n is the variable count.

    Iterated multiplication beats binary powering here: simplex-dense
    operands make big*small products cheaper than big*big squarings.
    """
    if k < 0:
        raise ValueError("negative exponent")
    out = {(0,) * n: Fraction(1)}
    for _ in range(k):
        out = mul_terms(out, a)
    return out


def eval_terms(a: dict, point: tuple) -> Fraction:
    """Evaluate the term dict at a point (exact)."""
    total = _ZERO
    pows: list[dict[int, Fraction]] = [{} for _ in point]
    for mono, coeff in a.items():
        val = coeff
        for i, e in enumerate(mono):
            if e:
                cache = pows[i]
                p = cache.get(e)
                if p is None:
                    p = cache[e] = point[i] ** e
                val *= p
        total += val
    return total
