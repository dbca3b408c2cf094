"""Jacobian matrices, Jacobian determinants, and the Keller-map predicate.

A Keller map is a polynomial self-map whose Jacobian determinant is a
nonzero constant.  The matrix convention here is entry (i, j) = d f_j / d x_i;
the determinant does not depend on the choice, but the segment-averaged
matrices in the certification module reuse this orientation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from keller_lab.linalg import PolyMatrix
from keller_lab.poly import Poly, PolyMap, as_rational, z_power


@dataclass(frozen=True)
class KellerVerdict:
    """Classification of det Df: constant and nonzero, or not."""

    is_keller: bool
    det: Poly
    constant_value: Fraction | None

    def __post_init__(self):
        if self.is_keller and self.constant_value is None:
            raise ValueError("a Keller verdict must carry the constant")


def jacobian_matrix(f: PolyMap) -> PolyMatrix:
    """Matrix of partials with entry (i, j) = d f_j / d x_i."""
    n = f.n
    return PolyMatrix([[f.components[j].partial(i + 1) for j in range(n)]
                       for i in range(n)])


def jacobian_det(f: PolyMap) -> Poly:
    """det Df, symbolically exact.

    Maps that know a closed form for their determinant (the z-shift family)
    expose it via jacobian_det_closed_form; everything else goes through the
    generic polynomial determinant.
    """
    closed_form = getattr(f, "jacobian_det_closed_form", None)
    if closed_form is not None:
        return closed_form()
    return jacobian_matrix(f).det()


def keller_check(f: PolyMap) -> KellerVerdict:
    """Compute det Df exactly and classify it."""
    det = jacobian_det(f)
    if det.is_constant() and not det.is_zero():
        return KellerVerdict(True, det, det.constant_value())
    return KellerVerdict(False, det, None)


def zshift_det_formula(coeffs: Sequence[Sequence[int | Fraction]]) -> Poly:
    """Closed-form det Df for the map X + sum_l P^(l) z^l, z = x1+...+xn.

    Df is a rank-one update of the identity (every partial of z equals 1),
    so det Df = 1 + sum_l l*(sum_k p_k^(l))*z^(l-1).  Rows index coordinates
    k = 1..n, columns index degrees l = 2..m.
    """
    rows = [tuple(as_rational(c) for c in row) for row in coeffs]
    if not rows:
        raise ValueError("coefficient table needs one row per coordinate")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise ValueError("coefficient table rows must have equal length")
    n = len(rows)
    det = Poly.const(n, 1)
    for idx in range(width):
        degree = idx + 2
        column_sum = sum((row[idx] for row in rows), Fraction(0))
        if column_sum:
            det = det + z_power(n, degree - 1) * (column_sum * degree)
    return det
