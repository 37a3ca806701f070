"""
奇点与接触阶测试
"""
from fractions import Fraction

import pytest

from core.errors import LineContainedError, NonReducedError
from core.parser import parse_form
from core.singular import SingularityType, contact_order, singular_points


def test_cusp_of_cuspidal_cubic():
    points = singular_points(parse_form("X^3+Y^2*Z"))
    assert len(points) == 1
    cusp = points[0]
    assert cusp.label() == "[0:0:1]"
    assert cusp.exact
    assert cusp.multiplicity == 2
    assert cusp.cone_pattern == (2,)
    assert cusp.type_hint is SingularityType.CUSP_A2


def test_node_of_nodal_cubic():
    points = singular_points(parse_form("X^3 + X^2*Z - Y^2*Z"))
    assert [p.label() for p in points] == ["[0:0:1]"]
    assert points[0].type_hint is SingularityType.NODE
    assert points[0].cone_pattern == (1, 1)


def test_smooth_curve_has_no_singular_points():
    assert singular_points(parse_form("X^3+Y^3+Z^3")) == []


def test_tacnode_quartic():
    points = singular_points(parse_form("X^4-Y^3*Z-Y^2*Z^2"))
    assert [p.label() for p in points] == ["[0:0:1]"]
    assert points[0].type_hint is SingularityType.TACNODE_A3


def test_triple_point_quartic():
    points = singular_points(parse_form("X^4-Y^3*Z"))
    assert len(points) == 1
    assert points[0].multiplicity == 3
    assert points[0].type_hint is SingularityType.Y3_X4


def test_singular_point_away_from_reference_chart():
    # 平移后的尖点位于 [1:1:1]
    points = singular_points(parse_form("(X-Z)^3 + (Y-Z)^2*Z"))
    assert [p.label() for p in points] == ["[1:1:1]"]
    assert points[0].type_hint is SingularityType.CUSP_A2


def test_non_reduced_curve_is_rejected():
    with pytest.raises(NonReducedError):
        singular_points(parse_form("X^2*Y"))


def test_contact_order_at_flex():
    fermat = parse_form("X^3+Y^3+Z^3")
    flex = (Fraction(0), Fraction(-1), Fraction(1))
    assert contact_order(fermat, flex, (1, 0, 0)) == 3
    assert contact_order(fermat, flex, (0, 1, 0)) == 1
    assert contact_order(fermat, (1, 0, 0), (0, 1, 0)) == 0


def test_contact_order_numeric_point():
    fermat = parse_form("X^3+Y^3+Z^3")
    assert contact_order(fermat, (0j, -1 + 0j, 1 + 0j), (1 + 0j, 0j, 0j)) == 3


def test_contact_order_line_inside_curve():
    with pytest.raises(LineContainedError):
        contact_order(parse_form("X^3 + X*Y*Z"), (0, 0, 1), (0, 1, 0))
