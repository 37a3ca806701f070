"""
超椭圆族与 j 不变量测试
"""
import random
from fractions import Fraction

import pytest

from core.errors import DegenerateFamilyError, InvalidInputError
from core.exactpoly import UnivariatePoly
from core.fibration import (
    J_MIN_SAMPLES,
    J_SAMPLE_POINTS,
    eliminate_quadratic_term,
    family_from_coefficients,
    family_from_pair,
    is_locally_trivial,
    j_constancy,
    pair_from_family,
)
from core.moduli import invariants
from core.numkernel import complex_roots
from core.parser import parse_family, parse_form
from core.pencil import setup
from core.weierstrass import reduce

T = UnivariatePoly((0, 1))


def _family(text):
    return family_from_coefficients(parse_family(text))


def test_j_of_cuspidal_pair():
    report = j_constancy(T ** 2, T ** 3)
    assert report.constant
    assert report.value == Fraction(1728 * 4, 31)
    assert report.numeric_agrees


def test_j_zero_and_1728():
    assert j_constancy(UnivariatePoly(), T + 1).value == 0
    assert j_constancy(T * T + 2, UnivariatePoly()).value == 1728


def test_j_non_constant():
    report = j_constancy(T, UnivariatePoly.constant(1))
    assert not report.constant
    assert report.value is None
    assert report.numeric_agrees


def test_j_degenerate_family():
    with pytest.raises(DegenerateFamilyError):
        j_constancy(UnivariatePoly(), UnivariatePoly())
    # 4f2^3 + 27f3^2 = 4·(-3)^3 + 27·2^2 = 0
    with pytest.raises(DegenerateFamilyError):
        j_constancy(UnivariatePoly.constant(-3), UnivariatePoly.constant(2))


def test_j_degree_note():
    report = j_constancy(T ** 3, UnivariatePoly.constant(1))
    assert report.notes


def test_j_sampling_avoids_discriminant_zeros():
    # 判别式 4f2^3 在全部预设采样点上为零
    f2 = UnivariatePoly.from_roots(J_SAMPLE_POINTS)
    report = j_constancy(f2, UnivariatePoly())
    assert report.value == 1728
    assert len(report.samples) == J_MIN_SAMPLES
    assert all(t not in J_SAMPLE_POINTS for t, _ in report.samples)
    assert all(abs(j - 1728) < 1e-9 for _, j in report.samples)
    assert report.numeric_agrees
    assert any("追加" in note for note in report.notes)


def test_j_sampling_skips_zeros_but_keeps_presets():
    # 4·(-3)^3 + 27·(8t)^2 在 t = ±1/4 处为零
    report = j_constancy(UnivariatePoly.constant(-3), T * 8)
    sampled = [t for t, _ in report.samples]
    assert Fraction(1, 4) not in sampled and Fraction(-1, 4) not in sampled
    assert len(sampled) == len(J_SAMPLE_POINTS) - 2
    assert not report.constant
    assert report.numeric_agrees


def test_eliminate_quadratic_term():
    g2, g3 = eliminate_quadratic_term(
        UnivariatePoly.constant(3), UnivariatePoly(), UnivariatePoly()
    )
    # (x-1)^3 + 3(x-1)^2 = x^3 - 3x + 2
    assert g2 == UnivariatePoly.constant(-3)
    assert g3 == UnivariatePoly.constant(2)


@pytest.mark.parametrize("text,expected", [
    ("z^2 = x^3 + t^2*x + t^3", True),
    ("z^2 = x^3 + t", True),
    ("z^2 = x^3 + t*x + 1", False),
])
def test_elliptic_families(text, expected):
    verdict = is_locally_trivial(_family(text))
    assert verdict.isotrivial is expected
    assert verdict.j_report is not None
    assert verdict.j_report.constant is expected


def test_cubic_root_family_matches_cyclic_cover():
    verdict = is_locally_trivial(_family("z^2 = x^3 + t"))
    assert verdict.via_pair.k == 3
    assert verdict.pair.curve().to_text() == "X^3 + Y*Z^2"


def test_family_with_quadratic_term_is_normalized():
    verdict = is_locally_trivial(_family("z^2 = x^3 + 3*x^2 + t^3"))
    assert verdict.j_report is not None
    assert verdict.isotrivial == verdict.j_report.constant


def test_higher_genus_family():
    fam = _family("z^2 = x^5 + t^5")
    assert fam.genus == 2
    verdict = is_locally_trivial(fam)
    assert verdict.isotrivial
    assert verdict.j_report is None


def test_family_pair_round_trip():
    w = reduce(setup(parse_form("X^3 + X*Y^2 + Y^3 + Z^3"), (1, 0, 0)))
    fam = family_from_pair(w)
    again = pair_from_family(fam)
    assert again.curve() == w.curve()


def test_family_text():
    assert _family("z^2 = x^3 + t^2*x + t^3").to_text() == "z^2 = x^3 + (y^2)*x + (y^3)"


def test_zero_family_is_rejected():
    with pytest.raises(InvalidInputError):
        family_from_coefficients({0: UnivariatePoly()})


def test_cubic_affine_invariant_matches_j():
    # x^3 + g2 x + g3 的根：e2 = g2，e3 = -g3，所以 j = 1728·4 / (4 + 27·e3²/e2³)
    rng = random.Random(43)
    checked = 0
    while checked < 30:
        f1, f2, f3 = (UnivariatePoly.constant(rng.randint(-5, 5)) for _ in range(3))
        g2, g3 = eliminate_quadratic_term(f1, f2, f3)
        if g2.is_zero() or g3.is_zero() or (g2 ** 3 * 4 + g3 ** 2 * 27).is_zero():
            continue
        j = float(j_constancy(g2, g3).value)
        cubic = UnivariatePoly((f3.coefficient(0), f2.coefficient(0), f1.coefficient(0), 1))
        inv = invariants(complex_roots(cubic).values())
        assert inv.j0 == 2
        from_roots = 1728 * 4 / (4 + 27 * inv.values[0])
        assert abs(from_roots - j) <= 1e-6 * (1 + abs(j))
        checked += 1
