"""Composition, factorization, and planar normal forms for z-shift maps.

A Keller z-shift map factors into rank-one maps: with the zero-sum gamma
basis e_j - e_(j+1) fixed, the coefficient table splits degree by degree
through an exact linear solve.  Conversely a list of rank-one factors
composes in closed form (tables add through the gamma/alpha outer product).
The planar normal form conjugates a degree-(m+1) perturbed two-variable map
into the symmetric pair (u1 + a*(x+y)^(m+1), u2 - a*(x+y)^(m+1)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from keller_lab.families import (
    RankOneSpec,
    ZShiftMap,
    compose_zshift,
    conjugate,
    rank_one_map,
    zshift_from_map,
)
from keller_lab.jacobian import keller_check
from keller_lab.linalg import RatMatrix, rat_solve
from keller_lab.poly import Poly, PolyMap

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class Factorization:
    """Rank-one factors whose left-to-right composition is product."""

    factors: tuple[RankOneSpec, ...]
    product: ZShiftMap

    def verify(self) -> bool:
        return compose_rank_one_factors(
            self.factors, n=self.product.n) == self.product


@dataclass(frozen=True)
class MinorWitness:
    """A nonzero 2x2 minor of the coefficient table (1-based labels)."""

    rows: tuple[int, int]
    degrees: tuple[int, int]
    entries: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    minor: Fraction


@dataclass(frozen=True)
class MembershipResult:
    """Whether a coefficient table is a rank-one outer product."""

    member: bool
    spec: RankOneSpec | None
    witness: MinorWitness | None


def compose_rank_one_factors(factors: Iterable[RankOneSpec],
                             n: int | None = None) -> ZShiftMap:
    """Closed-form composition: table entries p_k^(l) = sum_j g_k^(j) a_l^(j).

    The closed form is verified against the iterated symbolic composition
    of the factor maps before returning.
    """
    specs = tuple(factors)
    if not specs:
        if n is None:
            raise ValueError("an empty factor list needs an explicit dimension")
        return ZShiftMap(((),) * n)
    if n is not None and specs[0].n != n:
        raise ValueError(f"factor dimension {specs[0].n} does not match {n}")
    n = specs[0].n
    if any(s.n != n for s in specs):
        raise ValueError("all factors must share one dimension")
    width = max(s.m - 1 for s in specs)
    table = [[_ZERO] * width for _ in range(n)]
    for s in specs:
        for k in range(n):
            for idx, a in enumerate(s.alphas):
                table[k][idx] += s.gamma[k] * a
    closed = ZShiftMap(table)
    iterated = ZShiftMap(((),) * n)
    for s in specs:
        iterated = compose_zshift(iterated, rank_one_map(s))
    if iterated != closed:
        raise AssertionError(
            "closed-form composition disagrees with iterated composition")
    return closed


def difference_gammas(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """The zero-sum basis e_j - e_(j+1), j = 1..n-1."""
    out = []
    for j in range(n - 1):
        g = [_ZERO] * n
        g[j] = _ONE
        g[j + 1] = -_ONE
        out.append(tuple(g))
    return tuple(out)


def decompose_zshift(f: ZShiftMap) -> Factorization:
    """Split a Keller z-shift map into n-1 rank-one factors.

    The gammas are fixed to e_j - e_(j+1); those span the zero-sum subspace,
    so each degree column of the table is solvable exactly, and full column
    rank makes the solution unique.
    """
    if not f.is_keller_family():
        raise ValueError("decomposition requires zero column sums")
    n = f.n
    gammas = difference_gammas(n)
    if not gammas:
        return Factorization((), f)
    gamma_matrix = RatMatrix([[g[k] for g in gammas] for k in range(n)])
    width = f.m - 1
    per_factor: list[list[Fraction]] = [[] for _ in gammas]
    for idx in range(width):
        column = [f.coeffs[k][idx] for k in range(n)]
        result = rat_solve(gamma_matrix, column)
        if result.solution is None or result.nullspace:
            raise AssertionError("zero-sum column failed to solve uniquely")
        for j, value in enumerate(result.solution):
            per_factor[j].append(value)
    factors = tuple(RankOneSpec(g, tuple(alphas))
                    for g, alphas in zip(gammas, per_factor))
    if compose_rank_one_factors(factors, n=n) != f:
        raise AssertionError("factorization failed to reproduce the map")
    return Factorization(factors, f)


def rank_one_membership(f: ZShiftMap) -> MembershipResult:
    """Decide whether the coefficient table is an outer product g*a.

    Membership holds exactly when the n x (m-1) table has rank at most one;
    a non-member gets the first nonzero 2x2 minor as a checkable witness.
    """
    if not f.is_keller_family():
        raise ValueError("membership test requires zero column sums")
    n, width = f.n, f.m - 1
    t = f.coeffs
    for k1 in range(n):
        for k2 in range(k1 + 1, n):
            for c1 in range(width):
                for c2 in range(c1 + 1, width):
                    minor = t[k1][c1] * t[k2][c2] - t[k1][c2] * t[k2][c1]
                    if minor:
                        witness = MinorWitness(
                            rows=(k1 + 1, k2 + 1),
                            degrees=(c1 + 2, c2 + 2),
                            entries=((t[k1][c1], t[k1][c2]),
                                     (t[k2][c1], t[k2][c2])),
                            minor=minor)
                        return MembershipResult(False, None, witness)
    # rank <= 1: recover gamma from the first nonzero column
    pivot_col = next((c for c in range(width)
                      if any(t[k][c] for k in range(n))), None)
    if pivot_col is None:
        spec = RankOneSpec((_ZERO,) * n, (_ZERO,) * width)
        return MembershipResult(True, spec, None)
    gamma = tuple(t[k][pivot_col] for k in range(n))
    k0 = next(k for k in range(n) if gamma[k])
    alphas = tuple(t[k0][c] / gamma[k0] for c in range(width))
    spec = RankOneSpec(gamma, alphas)
    if ZShiftMap(spec.coefficient_table()) != f:
        raise AssertionError("rank-one recovery failed to reproduce the table")
    return MembershipResult(True, spec, None)


CASE_ACTIVE_BASE = "nonidentity-base"
CASE_SCALED = "identity-base-scaled"
CASE_SHEAR = "identity-base-shear"


@dataclass(frozen=True)
class PlanarNormalForm:
    """f_tilde = A^(-1) o F o A with F the symmetric (x+y)-power pair.

    F is the rank-one map with gamma (1,-1) and alphas extended by
    alpha_top at degree m+1.  When the unperturbed base is not the
    identity, A is the identity matrix.  swapped records that the input
    had its coordinates exchanged before matching; degenerate records a
    vanishing perturbation.
    """

    a: RatMatrix
    alpha_top: Fraction
    base: RankOneSpec
    case_tag: str
    m: int
    swapped: bool = False
    degenerate: bool = False

    def normal_map(self) -> ZShiftMap:
        alphas = self.base.alphas
        alphas = alphas + (_ZERO,) * (self.m - 1 - len(alphas))
        return rank_one_map(RankOneSpec(self.base.gamma,
                                        alphas + (self.alpha_top,)))

    def reconstruct(self) -> PolyMap:
        return conjugate(self.a.inverse(), self.normal_map(), self.a)


def _swap_xy(p: Poly) -> Poly:
    return Poly(2, {(e2, e1): c for (e1, e2), c in p.terms.items()})


def _swap_map(f: PolyMap) -> PolyMap:
    return PolyMap([_swap_xy(f.components[1]), _swap_xy(f.components[0])])


def planar_normal_form(f_tilde: PolyMap) -> PlanarNormalForm:
    """Run the normal-form algorithm on a two-variable map.

    Steps: split off the top-degree homogeneous pair (W, w); validate the
    rest as a rank-one base with gamma (1,-1); confirm det Df = 1 and the
    cross-partial identity W_x w_y - w_x W_y = 0; recover the ratio
    lambda with w = lambda*W and match W against b0*(y - lambda*x)^(m+1);
    then pick the conjugation matrix by case.  The returned normal form is
    re-verified symbolically before being returned.
    """
    if f_tilde.n != 2:
        raise ValueError("normal form is defined for two-variable maps")
    degree = f_tilde.degree()
    if degree <= 1:
        if not f_tilde.is_identity():
            raise ValueError(
                "degree-1 input must be the identity map")
        result = PlanarNormalForm(
            a=RatMatrix.identity(2), alpha_top=_ZERO,
            base=RankOneSpec((_ONE, -_ONE), ()), case_tag=CASE_ACTIVE_BASE,
            m=1, degenerate=True)
        _verify_normal_form(result, f_tilde)
        return result

    m = degree - 1
    top_w = f_tilde.components[0].homogeneous_part(degree)
    top_small = f_tilde.components[1].homogeneous_part(degree)
    base_map = PolyMap([f_tilde.components[0] - top_w,
                        f_tilde.components[1] - top_small])

    verdict = keller_check(f_tilde)
    if not verdict.is_keller or verdict.constant_value != 1:
        raise ValueError("Jacobian determinant must be identically 1")

    cross = (top_w.partial(1) * top_small.partial(2)
             - top_small.partial(1) * top_w.partial(2))
    if not cross.is_zero():
        raise ValueError("top-degree perturbation pair is not degenerate "
                         "(cross-partial determinant is nonzero)")

    try:
        base_zshift = zshift_from_map(base_map)
    except ValueError as exc:
        raise ValueError(
            f"lower-degree part is not a coordinate-sum shift: {exc}") from exc
    if not base_zshift.is_keller_family():
        raise ValueError(
            "lower-degree part must shift the two coordinates oppositely")
    base_alphas = tuple(base_zshift.coeffs[0])
    base = RankOneSpec((_ONE, -_ONE),
                       base_alphas + (_ZERO,) * (m - 1 - len(base_alphas)))

    if top_w.is_zero():
        # w perturbs only the second coordinate; solve the mirrored problem
        inner = planar_normal_form(_swap_map(f_tilde))
        sw = inner.a
        result = PlanarNormalForm(
            a=RatMatrix([[sw.data[1][1], sw.data[1][0]],
                         [sw.data[0][1], sw.data[0][0]]]),
            alpha_top=-inner.alpha_top,
            base=RankOneSpec(inner.base.gamma,
                             tuple(-a for a in inner.base.alphas)),
            case_tag=inner.case_tag, m=inner.m, swapped=True,
            degenerate=inner.degenerate)
        _verify_normal_form(result, f_tilde)
        return result

    lead_mono, lead_coeff = top_w.leading()
    ratio = top_small.coefficient(lead_mono) / lead_coeff
    if top_small != top_w * ratio:
        raise ValueError("perturbation pair is not proportional")

    beta0 = top_w.coefficient((0, degree))
    y_minus = Poly.variable(2, 2) - Poly.variable(2, 1) * ratio
    if top_w != (y_minus ** degree) * beta0:
        raise ValueError(
            "top perturbation is not a power of the matched binomial")

    base_active = any(a != 0 for a in base.alphas)
    if base_active:
        if ratio != -1:
            raise ValueError(
                "an active base forces the perturbation ratio to be -1")
        result = PlanarNormalForm(
            a=RatMatrix.identity(2), alpha_top=beta0, base=base,
            case_tag=CASE_ACTIVE_BASE, m=m)
    elif ratio != 0:
        result = PlanarNormalForm(
            a=RatMatrix([[-ratio, _ZERO], [_ZERO, _ONE]]),
            alpha_top=-ratio * beta0, base=base,
            case_tag=CASE_SCALED, m=m)
    else:
        result = PlanarNormalForm(
            a=RatMatrix([[_ONE, _ZERO], [-_ONE, _ONE]]),
            alpha_top=beta0, base=base,
            case_tag=CASE_SHEAR, m=m)
    _verify_normal_form(result, f_tilde)
    return result


def _verify_normal_form(result: PlanarNormalForm, f_tilde: PolyMap) -> None:
    rebuilt = result.reconstruct()
    if tuple(rebuilt.components) != tuple(f_tilde.components):
        raise AssertionError("normal form failed to reconstruct the input")
    check = keller_check(result.normal_map())
    if not check.is_keller or check.constant_value != 1:
        raise AssertionError("normal map is not a unit-determinant map")
