"""
文本解析测试
"""
from fractions import Fraction

import pytest

from core.errors import ParseError
from core.exactpoly import UnivariatePoly
from core.parser import parse_family, parse_form, parse_point, parse_polynomial


def test_parse_fermat_cubic():
    curve = parse_form("X^3+Y^3+Z^3")
    assert curve.degree == 3
    assert curve.terms == {(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): 1}


def test_parse_rational_coefficients_and_parentheses():
    curve = parse_form("1/2*X^2*Y - (Y - Z)^3 + 3/4*Z^3")
    assert curve.terms[(2, 1, 0)] == Fraction(1, 2)
    assert curve.terms[(0, 3, 0)] == -1
    assert curve.terms[(0, 2, 1)] == 3
    assert curve.terms[(0, 1, 2)] == -3
    assert curve.terms[(0, 0, 3)] == Fraction(7, 4)


def test_lowercase_variables_are_accepted():
    assert parse_form("x^3 + y^2*z") == parse_form("X^3 + Y^2*Z")


def test_subtraction_is_left_associative():
    poly = parse_polynomial("X - Y - Z")
    assert poly == {(1, 0, 0): 1, (0, 1, 0): -1, (0, 0, 1): -1}


def test_implicit_multiplication_is_rejected():
    with pytest.raises(ParseError) as info:
        parse_form("2X^3 + Y^3")
    assert "隐式乘法" in info.value.message
    assert info.value.position == (1, 2)
    assert "^" in info.value.annotated()


def test_implicit_product_of_variables_is_rejected():
    with pytest.raises(ParseError):
        parse_form("X Y Z")


def test_non_homogeneous_input_is_rejected():
    with pytest.raises(ParseError) as info:
        parse_form("X^3 + Y^2")
    assert "齐次" in info.value.message


def test_zero_polynomial_is_rejected():
    with pytest.raises(ParseError):
        parse_form("X^2 - X^2")


@pytest.mark.parametrize("source", ["", "X^", "X^3 +", "(X + Y", "X^2^2", "X / Y", "W^3", "X^3 $ Y^3"])
def test_malformed_input(source):
    with pytest.raises(ParseError):
        parse_form(source)


def test_division_by_zero_literal():
    with pytest.raises(ParseError) as info:
        parse_form("1/0*X^3")
    assert "分母" in info.value.message


def test_parse_point():
    assert parse_point("1,0,0") == (1, 0, 0)
    assert parse_point(" 1/2 , -3 , 2 ") == (Fraction(1, 2), -3, 2)


@pytest.mark.parametrize("source", ["1,0", "1,0,0,0", "0,0,0", "1,a,0", "1,1/0,0"])
def test_parse_point_errors(source):
    with pytest.raises(ParseError):
        parse_point(source)


def test_parse_family_with_t_alias():
    coefficients = parse_family("z^2 = x^3 + t^2*x + t^3")
    assert coefficients[3] == UnivariatePoly((1,))
    assert coefficients[1] == UnivariatePoly((0, 0, 1))
    assert coefficients[0] == UnivariatePoly((0, 0, 0, 1))
    assert parse_family("z^2 = x^3 + y^2*x + y^3") == coefficients


def test_parse_family_errors_are_located_in_full_source():
    with pytest.raises(ParseError) as info:
        parse_family("z^2 = x^3 + 2t")
    start, _ = info.value.position
    assert info.value.source == "z^2 = x^3 + 2t"
    assert info.value.source[start] == "t"


@pytest.mark.parametrize("source", ["x^3 + t", "w^2 = x^3 + t", "z^2 = x^3 = t", "z^2 = x^3 - x^3"])
def test_parse_family_shape_errors(source):
    with pytest.raises(ParseError):
        parse_family(source)
