"""Coordinate-sum shift maps: construction, composition, inversion."""

import random
from fractions import Fraction

import pytest

from keller_lab.families import (
    RankOneSpec,
    ZShiftMap,
    compose_zshift,
    conjugate,
    keller_zshift_map,
    rank_one_map,
    shear_matrix,
    zshift_from_map,
    zshift_inverse,
)
from keller_lab.jacobian import keller_check
from keller_lab.linalg import RatMatrix
from keller_lab.parser import parse_map
from keller_lab.poly import Poly, PolyMap

from conftest import (
    random_keller_zshift,
    random_point,
    random_rank_one_spec,
    rational,
)


class TestRankOneSpec:
    def test_zero_sum_enforced(self):
        with pytest.raises(ValueError):
            RankOneSpec((1, 2), (1,))
        RankOneSpec((1, -1), (1,))

    def test_empty_gamma_rejected(self):
        with pytest.raises(ValueError):
            RankOneSpec((), ())

    def test_coefficient_table_is_outer_product(self):
        spec = RankOneSpec((1, 2, -3), (1, 2))
        assert spec.coefficient_table() == (
            (1, 2), (2, 4), (-3, -6))

    def test_dimensions(self):
        spec = RankOneSpec((1, -1), (5, 7, 9))
        assert spec.n == 2
        assert spec.m == 4

    def test_shift_polynomial_pads_constant_and_linear(self):
        spec = RankOneSpec((1, -1), (5, 7))
        assert spec.shift_polynomial() == (0, 0, 5, 7)


class TestZShiftMap:
    def test_components_expand_the_table(self):
        f = ZShiftMap([[-11, -13], [6, 9], [5, 4]])
        z = Poly.variable(3, 1) + Poly.variable(3, 2) + Poly.variable(3, 3)
        assert f.components[0] == Poly.variable(3, 1) - 11 * z**2 - 13 * z**3
        assert f.components[1] == Poly.variable(3, 2) + 6 * z**2 + 9 * z**3
        assert f.components[2] == Poly.variable(3, 3) + 5 * z**2 + 4 * z**3

    def test_trailing_zero_columns_trimmed(self):
        f = ZShiftMap([[1, 0], [-1, 0]])
        g = ZShiftMap([[1], [-1]])
        assert f.m == g.m == 2
        assert f == g

    def test_identity_is_width_zero(self):
        f = ZShiftMap([[], []])
        assert f.is_identity()
        assert f.m == 1
        assert f.degree() == 1

    def test_ragged_rows_rejected(self):
        with pytest.raises(ValueError):
            ZShiftMap([[1, 2], [3]])

    def test_eval_uses_coordinate_sum(self):
        f = ZShiftMap([[-11, -13], [6, 9], [5, 4]])
        assert f.eval((1, 0, 0)) == (-23, 15, 9)
        assert f.eval((0, 0, 0)) == (0, 0, 0)

    def test_eval_matches_expanded_components(self):
        rng = random.Random(21)
        for _ in range(5):
            f = random_keller_zshift(rng, 3, 4)
            pt = random_point(rng, 3)
            assert f.eval(pt) == PolyMap(f.components).eval(pt)

    def test_column_sums_and_keller(self):
        f = ZShiftMap([[-11, -13], [6, 9], [5, 4]])
        assert f.column_sums() == (0, 0)
        assert f.is_keller_family()
        g = ZShiftMap([[1, 0], [0, 1]])
        assert g.column_sums() == (1, 1)
        assert not g.is_keller_family()

    def test_degree_reflects_width(self):
        assert ZShiftMap([[0, 7], [0, -7]]).degree() == 3


class TestConstructors:
    def test_rank_one_map_is_keller(self):
        spec = RankOneSpec((1, 2, -3), (1, 2))
        f = rank_one_map(spec)
        assert f.is_keller_family()
        assert keller_check(f).constant_value == 1

    def test_keller_zshift_rejects_bad_columns(self):
        with pytest.raises(ValueError) as err:
            keller_zshift_map([[1, 0], [0, 1]])
        assert "degree" in str(err.value)

    def test_keller_zshift_accepts_good_table(self):
        f = keller_zshift_map([[-11, -13], [6, 9], [5, 4]])
        assert isinstance(f, ZShiftMap)


class TestZShiftRecognition:
    def test_round_trip_from_expressions(self):
        f = parse_map([
            "x1 - 11*(x1+x2+x3)^2 - 13*(x1+x2+x3)^3",
            "x2 + 6*(x1+x2+x3)^2 + 9*(x1+x2+x3)^3",
            "x3 + 5*(x1+x2+x3)^2 + 4*(x1+x2+x3)^3",
        ])
        zmap = zshift_from_map(f)
        assert zmap.coeffs == ((-11, -13), (6, 9), (5, 4))

    def test_zshift_maps_pass_through(self):
        rng = random.Random(3)
        f = random_keller_zshift(rng, 4, 4)
        assert zshift_from_map(PolyMap(f.components)) == f

    def test_rejects_non_zshift(self):
        with pytest.raises(ValueError):
            zshift_from_map(parse_map(["x + y^2", "y"]))

    def test_rejects_shifts_below_degree_two(self):
        with pytest.raises(ValueError):
            zshift_from_map(parse_map(["x + (x+y)", "y"]))

    def test_identity_recognized(self):
        assert zshift_from_map(PolyMap.identity(3)).is_identity()


class TestComposeZShift:
    def test_keller_tables_add(self):
        f = ZShiftMap([[1, 2], [-1, -2]])
        g = ZShiftMap([[3, 0], [-3, 0]])
        assert compose_zshift(f, g).coeffs == ((4, 2), (-4, -2))

    def test_matches_generic_composition(self):
        rng = random.Random(17)
        for _ in range(6):
            n = rng.randint(2, 3)
            outer = random_keller_zshift(rng, n, 3)
            inner = random_keller_zshift(rng, n, 3)
            fast = compose_zshift(outer, inner)
            slow = PolyMap(outer.components).compose(
                PolyMap(inner.components))
            assert PolyMap(fast.components) == slow

    def test_non_keller_inner_substitutes(self):
        # inner column sums feed the outer shifts through s(z)
        outer = ZShiftMap([[1], [1]])       # shift z^2 in both rows
        inner = ZShiftMap([[2], [1]])       # z o inner = z + 3 z^2
        composed = compose_zshift(outer, inner)
        slow = PolyMap(outer.components).compose(PolyMap(inner.components))
        assert PolyMap(composed.components) == slow

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            compose_zshift(ZShiftMap([[1], [-1]]),
                           ZShiftMap([[1], [0], [-1]]))


class TestInverse:
    def test_inverse_negates_table(self):
        f = keller_zshift_map([[-11, -13], [6, 9], [5, 4]])
        g = zshift_inverse(f)
        assert g.coeffs == ((11, 13), (-6, -9), (-5, -4))

    def test_round_trip_is_identity(self):
        rng = random.Random(31)
        for _ in range(8):
            f = random_keller_zshift(rng, rng.randint(2, 4), rng.randint(2, 4))
            g = zshift_inverse(f)
            assert compose_zshift(g, f).is_identity()
            assert compose_zshift(f, g).is_identity()

    def test_generic_composition_confirms(self):
        f = keller_zshift_map([[5, -2], [-5, 2]])
        g = zshift_inverse(f)
        both = PolyMap(g.components).compose(PolyMap(f.components))
        assert both.is_identity()

    def test_point_round_trip(self):
        rng = random.Random(5)
        f = random_keller_zshift(rng, 3, 4)
        g = zshift_inverse(f)
        for _ in range(10):
            pt = random_point(rng, 3)
            assert g.eval(f.eval(pt)) == pt

    def test_non_keller_rejected(self):
        with pytest.raises(ValueError):
            zshift_inverse(ZShiftMap([[1], [1]]))


class TestConjugate:
    def test_identity_conjugation_is_identity(self):
        f = rank_one_map(RankOneSpec((1, -1), (2,)))
        ident = RatMatrix.identity(2)
        assert conjugate(ident, f, ident) == PolyMap(f.components)

    def test_linear_sandwich(self):
        f = PolyMap.identity(2)
        a = RatMatrix([[2, 0], [0, 1]])
        b = RatMatrix([[Fraction(1, 2), 0], [0, 1]])
        g = conjugate(a, f, b)
        assert g.is_identity()

    def test_singular_matrices_rejected(self):
        f = PolyMap.identity(2)
        singular = RatMatrix([[1, 1], [1, 1]])
        with pytest.raises(ValueError):
            conjugate(singular, f, RatMatrix.identity(2))
        with pytest.raises(ValueError):
            conjugate(RatMatrix.identity(2), f, singular)


class TestSheared:
    def test_sheared_components_are_sparse(self):
        f = ZShiftMap([[-11, -13], [6, 9], [5, 4]])
        g = f.sheared()
        y1 = Poly.variable(3, 1)
        y2 = Poly.variable(3, 2)
        y3 = Poly.variable(3, 3)
        assert g.components[0] == y1 - y2 - y3 - 11 * y1**2 - 13 * y1**3
        assert g.components[1] == y2 + 6 * y1**2 + 9 * y1**3
        assert g.components[2] == y3 + 5 * y1**2 + 4 * y1**3

    def test_sheared_equals_compose_with_shear(self):
        rng = random.Random(8)
        for _ in range(4):
            n = rng.randint(2, 4)
            f = random_keller_zshift(rng, n, 3)
            from keller_lab.linalg import linear_poly_map
            shear = linear_poly_map(shear_matrix(n))
            assert f.sheared() == PolyMap(f.components).compose(shear)

    def test_shear_matrix_shape(self):
        s = shear_matrix(3)
        assert s.data == [
            [Fraction(1), Fraction(-1), Fraction(-1)],
            [Fraction(0), Fraction(1), Fraction(0)],
            [Fraction(0), Fraction(0), Fraction(1)],
        ]


class TestEqualityAndRepr:
    def test_equality_with_plain_polymap(self):
        f = ZShiftMap([[1], [-1]])
        assert f == PolyMap(f.components)
        assert PolyMap(f.components) == f

    def test_hash_consistency(self):
        f = ZShiftMap([[1], [-1]])
        g = ZShiftMap([[1, 0], [-1, 0]])
        assert hash(PolyMap(f.components)) == hash(g)

    def test_repr_mentions_table(self):
        assert "ZShiftMap" in repr(ZShiftMap([[1], [-1]]))
