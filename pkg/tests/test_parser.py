"""Expression and map-file parsing."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from keller_lab.families import ZShiftMap, keller_zshift_map, rank_one_map
from keller_lab.families import RankOneSpec
from keller_lab.parser import (
    ParseError,
    infer_dimension,
    is_family_format,
    parse_family_file,
    parse_map,
    parse_map_file,
    parse_poly,
    tokenize,
)
from keller_lab.poly import Poly, PolyMap


class TestTokenizer:
    def test_positions(self):
        tokens = tokenize("x1 + 2")
        assert [(t.kind, t.position) for t in tokens] == [
            ("name", 0), ("plus", 3), ("int", 5), ("end", 6)]

    def test_bad_character_position(self):
        with pytest.raises(ParseError) as err:
            tokenize("x1 @ 2")
        assert err.value.position == 3

    def test_whitespace_skipped(self):
        assert len(tokenize("  x1  ")) == 2


class TestExpressions:
    def test_constant(self):
        assert parse_poly("7", 1) == Poly.const(1, 7)

    def test_fraction_literal(self):
        p = parse_poly("3/2*x1", 1)
        assert p == Poly.monomial(1, (1,), Fraction(3, 2))

    def test_fraction_binds_before_product(self):
        # 1/2*x1 is (1/2)*x1, not 1/(2*x1)
        assert parse_poly("1/2*x1", 1).eval((2,)) == 1

    def test_power_expansion(self):
        p = parse_poly("x1 + (x1+x2)^2", 2)
        expected = (Poly.variable(2, 1)
                    + (Poly.variable(2, 1) + Poly.variable(2, 2)) ** 2)
        assert p == expected

    def test_unary_minus_binds_tighter_than_sum(self):
        assert parse_poly("-x1^2", 1).eval((3,)) == -9

    def test_subtraction_chain_left_associates(self):
        assert parse_poly("5 - 2 - 1", 1).eval((0,)) == 2

    def test_worked_component(self):
        p = parse_poly("x1 - 11*(x1+x2+x3)^2 - 13*(x1+x2+x3)^3", 3)
        assert p.eval((1, 0, 0)) == 1 - 11 - 13
        assert p.eval((1, 1, -2)) == 1

    def test_zero_exponent(self):
        assert parse_poly("x1^0", 1) == Poly.const(1, 1)

    def test_xy_aliases_in_two_variables(self):
        assert parse_poly("x + y", 2) == parse_poly("x1 + x2", 2)

    def test_x_alias_in_one_variable(self):
        assert parse_poly("x^2", 1) == parse_poly("x1^2", 1)


class TestExpressionErrors:
    def test_unknown_variable_reports_limit(self):
        with pytest.raises(ParseError, match="unknown variable 'x4'"):
            parse_poly("x4", 3)

    def test_alias_rejected_in_three_variables(self):
        with pytest.raises(ParseError, match="unknown variable 'x'"):
            parse_poly("x", 3)

    def test_y_rejected_in_one_variable(self):
        with pytest.raises(ParseError, match="unknown variable 'y'"):
            parse_poly("y", 1)

    def test_symbolic_exponent_rejected(self):
        with pytest.raises(ParseError, match="exponent"):
            parse_poly("x1^x1", 1)

    def test_zero_denominator(self):
        with pytest.raises(ParseError, match="zero denominator"):
            parse_poly("1/0", 1)

    def test_unbalanced_paren(self):
        with pytest.raises(ParseError, match="expected rparen"):
            parse_poly("(x1 + 1", 1)

    def test_trailing_garbage(self):
        with pytest.raises(ParseError) as err:
            parse_poly("x1 )", 1)
        assert err.value.position == 3

    def test_empty_input(self):
        with pytest.raises(ParseError):
            parse_poly("", 1)

    def test_dimension_bounds(self):
        with pytest.raises(ValueError):
            parse_poly("x1", 0)
        with pytest.raises(ValueError):
            parse_poly("x1", 10)


class TestRoundTrip:
    def test_canonical_string_reparses(self):
        p = parse_poly("(x1 - x2)^3 + 1/3*x2", 2)
        assert parse_poly(str(p), 2) == p

    def test_zero(self):
        zero = Poly.zero(2)
        assert parse_poly(str(zero), 2) == zero

    @given(st.dictionaries(
        st.tuples(st.integers(0, 3), st.integers(0, 3)),
        st.fractions(min_value=-50, max_value=50, max_denominator=9),
        max_size=6))
    def test_random_polys_round_trip(self, terms):
        p = Poly.zero(2)
        for exps, coeff in terms.items():
            p = p + Poly.monomial(2, exps, coeff)
        assert parse_poly(str(p), 2) == p


class TestMapParsing:
    def test_dimension_inferred_from_names(self):
        assert infer_dimension(["x1 + x3", "0", "0"]) == 3
        assert infer_dimension(["x + y"]) == 2
        assert infer_dimension(["x1"]) == 1

    def test_component_count_raises_inference(self):
        assert infer_dimension(["x1", "x1", "x1", "x1"]) == 4

    def test_parse_map_square(self):
        f = parse_map(["x + y^2", "y"])
        assert f.n == 2
        assert f.eval((1, 2)) == (5, 2)

    def test_component_count_mismatch(self):
        with pytest.raises(ParseError, match="component expressions"):
            parse_map(["x1 + x3", "0"])

    def test_empty_map(self):
        with pytest.raises(ParseError):
            parse_map([])

    def test_explicit_dimension_wins(self):
        f = parse_map(["x1", "x2", "x3"], n=3)
        assert f == PolyMap.identity(3)


class TestMapFiles:
    def test_expression_file(self):
        text = "# comment line\nx + y^2  # inline\n\ny\n"
        f = parse_map_file(text)
        assert f == parse_map(["x + y^2", "y"])

    def test_format_detection(self):
        assert is_family_format("family = zshift\n")
        assert not is_family_format("# note\nx + y\ny\n")
        assert not is_family_format("")

    def test_zshift_family(self, data_dir):
        f = parse_map_file((data_dir / "example_family.txt").read_text())
        assert f == keller_zshift_map(
            [[-11, -13], [6, 9], [5, 4]])

    def test_zshift_matches_expressions(self, data_dir):
        by_family = parse_map_file(
            (data_dir / "example_family.txt").read_text())
        by_expr = parse_map_file((data_dir / "example_map.txt").read_text())
        assert PolyMap(list(by_family.components)) == by_expr

    def test_rank_one_family(self, data_dir):
        f = parse_map_file((data_dir / "rank_one_family.txt").read_text())
        assert f == rank_one_map(RankOneSpec((1, 2, -3), (1, 2)))

    def test_quoted_family_name(self):
        text = 'family = "zshift"\nn = 2\nm = 2\np2 = 1, -1\n'
        assert parse_family_file(text) == keller_zshift_map([[1], [-1]])

    def test_rank_one_identity_when_m_is_one(self):
        text = "family = rank-one\nn = 2\nm = 1\ngamma = 1, -1\n"
        assert parse_family_file(text) == ZShiftMap([[], []])


class TestMapFileErrors:
    def test_duplicate_key(self):
        with pytest.raises(ParseError, match="duplicate key 'n'"):
            parse_family_file("family = zshift\nn = 2\nn = 3\n")

    def test_unknown_key(self):
        text = "family = zshift\nn = 2\nm = 2\np2 = 1, -1\nbogus = 1\n"
        with pytest.raises(ParseError, match="unexpected key 'bogus'"):
            parse_family_file(text)

    def test_missing_row(self):
        with pytest.raises(ParseError, match="missing row 'p3'"):
            parse_family_file("family = zshift\nn = 2\nm = 3\np2 = 1, -1\n")

    def test_row_width(self):
        with pytest.raises(ParseError, match="needs 2 entries"):
            parse_family_file("family = zshift\nn = 2\nm = 2\np2 = 1\n")

    def test_bad_rational_cites_line(self):
        with pytest.raises(ParseError, match="line 4"):
            parse_family_file("family = zshift\nn = 2\nm = 2\np2 = 1, z\n")

    def test_unknown_family(self):
        with pytest.raises(ParseError, match="unknown family 'affine'"):
            parse_family_file("family = affine\nn = 2\nm = 2\n")

    def test_missing_gamma(self):
        with pytest.raises(ParseError, match="missing 'gamma'"):
            parse_family_file("family = rank-one\nn = 2\nm = 2\nalpha = 1\n")

    def test_alpha_length(self):
        text = "family = rank-one\nn = 2\nm = 3\ngamma = 1, -1\nalpha = 1\n"
        with pytest.raises(ParseError, match="alpha needs 2 entries"):
            parse_family_file(text)

    def test_nonzero_column_sum_is_a_domain_error(self):
        # syntax is fine: the structural hypothesis fails downstream
        text = "family = zshift\nn = 2\nm = 2\np2 = 1, 1\n"
        with pytest.raises(ValueError) as err:
            parse_family_file(text)
        assert not isinstance(err.value, ParseError)

    def test_nonzero_gamma_sum_is_a_domain_error(self):
        text = "family = rank-one\nn = 2\nm = 2\ngamma = 1, 1\nalpha = 1\n"
        with pytest.raises(ValueError) as err:
            parse_family_file(text)
        assert not isinstance(err.value, ParseError)

    def test_malformed_line(self):
        with pytest.raises(ParseError, match="expected key = value"):
            parse_family_file("family = zshift\nn 2\n")
