"""
直线束测试
坐标变换、交点、特殊直线、切线共点与 T 轨迹
"""
import random
from fractions import Fraction

import pytest

from core.corpus import build_corpus, random_positive
from core.errors import DegenerateLineError, InvalidInputError, UnsupportedDegreeError
from core.parser import parse_form
from core.pencil import (
    LocusKind,
    PencilLine,
    apply_matrix,
    concurrency_threshold,
    intersect,
    sample_lines,
    setup,
    special_lines,
    t_locus,
    tangent_point,
)


def test_setup_moves_point_to_standard_position():
    curve = parse_form("X^3+Y^3+Z^3")
    pencil = setup(curve, (1, 2, 3))
    assert apply_matrix(pencil.to_standard, (1, 2, 3))[1:] == (0, 0)
    assert pencil.d == 3
    assert pencil.m == 0
    back = pencil.to_original((1, 0, 0))
    assert [3 * c for c in back] == [1, 2, 3]


def test_setup_picks_largest_coordinate_as_pivot():
    pencil = setup(parse_form("X^3+Y^3+Z^3"), (0, 0, 1))
    standard = apply_matrix(pencil.to_standard, (0, 0, 1))
    assert standard[0] != 0 and standard[1:] == (0, 0)


def test_setup_counts_multiplicity_at_p():
    # p = [0:0:1] 是尖点三次曲线的二重点：过 p 的直线只剩 1 个交点
    with pytest.raises(UnsupportedDegreeError):
        setup(parse_form("X^3+Y^2*Z"), (0, 0, 1))


def test_setup_strips_lines_through_p():
    pencil = setup(parse_form("Y*(X^3+Y^3+Z^3)"), (1, 0, 0))
    assert pencil.d == 3
    assert [(form.to_text(), mult) for form, mult in pencil.stripped] == [("Y", 1)]


def test_setup_rejects_zero_point():
    with pytest.raises(InvalidInputError):
        setup(parse_form("X^3+Y^3+Z^3"), (0, 0, 0))


def test_intersect_returns_d_points(fermat_pencil):
    roots = intersect(fermat_pencil, PencilLine(Fraction(1)))
    assert roots.degree == 3
    assert roots.is_simple()
    for x in roots.values():
        assert abs(x ** 3 + 2) < 1e-9


def test_special_lines_of_cuspidal_cubic(cusp_pencil):
    found = special_lines(cusp_pencil)
    assert [s.line.label() for s in found] == ["0", "inf"]
    assert all(s.count == 1 and s.exact for s in found)
    assert found[0].point == (0, 0, 1)
    assert found[0].contact == 3
    assert found[1].point == (0, 1, 0)


def test_special_lines_of_fermat_cubic(fermat_pencil):
    found = special_lines(fermat_pencil)
    assert len(found) == 3
    assert all(s.count == 1 for s in found)
    exact = [s for s in found if s.line.is_exact]
    assert [s.line.value for s in exact] == [-1]
    for special in found:
        assert abs(complex(special.line.value) ** 3 + 1) < 1e-9
        assert abs(complex(special.point[0])) < 1e-9


def test_special_line_with_degree_drop():
    # Z=0 上首项系数 Z 消失，X 次数从 3 掉到 2，剩下 x = ±i 两个点
    pencil = setup(parse_form("X^3*Z + X^2*Y^2 + Y^4 - Z^4"), (1, 0, 0))
    drops = [s for s in special_lines(pencil) if s.line.is_infinity]
    assert len(drops) == 1
    assert drops[0].degree_drop == 1
    assert drops[0].count == 2


def test_sample_lines_are_deterministic_and_generic(fermat_pencil):
    first = sample_lines(fermat_pencil, 10, seed=7)
    second = sample_lines(fermat_pencil, 10, seed=7)
    assert first == second
    assert len(first) == 10
    assert [line.value for line in first] == sorted(line.value for line in first)
    assert all(line.value != -1 for line in first)


def test_tangents_of_fermat_cubic_are_concurrent(fermat_pencil):
    report = tangent_point(fermat_pencil, PencilLine(Fraction(1)))
    assert report.concurrent
    assert report.max_deviation < 1e-9
    x, y, z = report.t_point
    # T = [0 : 1 : -y0^2]
    assert abs(x) < 1e-9
    assert abs(z / y + 1) < 1e-9


def test_tangent_point_rejects_special_line(cusp_pencil):
    with pytest.raises(DegenerateLineError):
        tangent_point(cusp_pencil, PencilLine(Fraction(0)))


def test_t_locus_of_fermat_cubic_is_line_x0(fermat_pencil):
    locus = t_locus(fermat_pencil, samples=8, seed=3)
    assert locus.kind is LocusKind.LINE_X0
    assert locus.max_x < locus.fit_tolerance
    assert locus.special_points
    assert locus.special_on_locus


def test_t_locus_of_non_constant_curve_is_scattered():
    pencil = setup(parse_form("X^3 + X*Z^2 + Y^3"), (1, 0, 0))
    locus = t_locus(pencil, samples=8, seed=3)
    assert locus.kind is LocusKind.SCATTERED
    assert locus.special_points == ()


def test_tangent_point_rejects_triple_contact():
    # y0=-1 时限制多项式是 (x+1)^3，三个交点重合
    pencil = setup(parse_form("(X-Y)^3+Y^3+Z^3"), (1, 0, 0))
    with pytest.raises(DegenerateLineError):
        tangent_point(pencil, PencilLine(Fraction(-1)))


@pytest.fixture(scope="module")
def degree_eight_positives():
    positives = [item for item in build_corpus(7, 60, 0) if item.d == 8]
    assert positives
    return positives


def test_t_locus_on_degree_eight_positives(degree_eight_positives):
    for item in degree_eight_positives:
        locus = t_locus(setup(item.curve, (1, 0, 0)), samples=12, seed=7, tol=1e-8, check_special=False)
        assert locus.skipped == 0, item.label
        assert locus.kind in (LocusKind.POINT, LocusKind.LINE_X0), item.label


def test_tangent_point_on_irrational_line_of_degree_eight_curve(degree_eight_positives):
    pencil = setup(degree_eight_positives[0].curve, (1, 0, 0))
    report = tangent_point(pencil, PencilLine(complex(0.3, 0.7)))
    assert report.points.distinct == 8
    assert report.concurrent


def test_tangents_and_t_locus_share_threshold(fermat_pencil):
    tol = 1e-8
    report = tangent_point(fermat_pencil, PencilLine(Fraction(2)), tol)
    locus = t_locus(fermat_pencil, samples=6, seed=3, tol=tol, check_special=False)
    assert report.threshold == locus.fit_tolerance == concurrency_threshold(tol)
    assert report.concurrent == (report.max_deviation <= report.threshold)
    assert all(r.concurrent for r in locus.reports)


def test_random_positives_have_concurrent_tangents():
    rng = random.Random(47)
    attempted = concurrent = 0
    for _ in range(8):
        pencil = setup(random_positive(rng, max_degree=6).curve, (1, 0, 0))
        for line in sample_lines(pencil, 10, seed=rng.randint(0, 10 ** 6)):
            attempted += 1
            concurrent += tangent_point(pencil, line).concurrent
    assert attempted > 0
    assert concurrent >= 0.95 * attempted
