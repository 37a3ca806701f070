"""
数值内核测试
"""
import cmath
import random
from fractions import Fraction

import numpy as np
import pytest

from core.errors import InvalidInputError, SizeMismatchError, ZeroPolynomialError
from core.exactpoly import UnivariatePoly
from core.numkernel import ComplexApprox, complex_roots, match_multisets, rational_roots


def test_complex_roots_of_cyclotomic():
    roots = complex_roots(UnivariatePoly((-1, 0, 0, 1)))
    assert roots.degree == 3
    assert roots.is_simple()
    expected = [cmath.exp(2j * cmath.pi * r / 3) for r in range(3)]
    assert match_multisets(roots.values(), expected, 1e-9) is not None


def test_complex_roots_are_sorted_deterministically():
    roots = complex_roots(UnivariatePoly.from_roots([3, -1, 2]))
    assert [round(r.re, 9) for r in roots.roots] == [-1.0, 2.0, 3.0]
    again = complex_roots(UnivariatePoly.from_roots([3, -1, 2]))
    assert again == roots


def test_complex_roots_report_multiplicity():
    roots = complex_roots(UnivariatePoly.from_roots([1, 1, -2]))
    assert roots.distinct == 2
    assert sorted(roots.multiplicity_hint) == [1, 2]
    assert roots.degree == 3
    assert len(roots.expanded()) == 3


def test_complex_roots_at_zero():
    roots = complex_roots(UnivariatePoly((0, 0, -4, 1)))
    assert roots.multiplicity_hint == (2, 1)
    assert roots.roots[0].value == 0


def test_complex_roots_accepts_complex_coefficients():
    roots = complex_roots([1j, 0, 1])
    assert roots.degree == 2
    for value in roots.values():
        assert abs(value * value + 1j) < 1e-9


def test_constant_polynomial_has_no_roots():
    assert complex_roots(UnivariatePoly((5,))).degree == 0


def test_zero_polynomial_is_rejected():
    with pytest.raises(ZeroPolynomialError):
        complex_roots(UnivariatePoly())


def test_degree_limit():
    with pytest.raises(InvalidInputError):
        complex_roots(UnivariatePoly.monomial(80) + 1)


def test_rational_roots():
    poly = UnivariatePoly.from_roots([Fraction(1, 3), Fraction(-5, 2), 0]) * UnivariatePoly((1, 0, 1))
    assert rational_roots(poly) == [Fraction(-5, 2), 0, Fraction(1, 3)]
    assert rational_roots(UnivariatePoly((-2, 0, 1))) == []


def test_match_multisets():
    perm = match_multisets([0, 1, 2], [2.0, 0.0, 1.0], 1e-9)
    assert perm == [1, 2, 0]
    assert match_multisets([0, 1], [0, 1.5], 1e-3) is None
    assert match_multisets([ComplexApprox.of(1j)], [1j], 1e-12) == [0]


def test_match_multisets_needs_augmenting_path():
    # 贪心会把 a_0 配给 1.0，只有重新分配才能成功
    perm = match_multisets([1.05, 1.0], [1.0, 1.2], 0.16)
    assert perm == [1, 0]


def test_match_multisets_size_mismatch():
    with pytest.raises(SizeMismatchError):
        match_multisets([0, 1], [0], 1e-9)


def test_triple_root_multiplicity():
    roots = complex_roots(UnivariatePoly.from_roots([-1, -1, -1]))
    assert roots.multiplicity_hint == (3,)
    assert abs(roots.values()[0] + 1) < 1e-12


def test_quadruple_and_simple_root():
    third = Fraction(1, 3)
    roots = complex_roots(UnivariatePoly.from_roots([third, third, third, third, 2]))
    assert roots.multiplicity_hint == (4, 1)
    assert abs(roots.values()[0] - 1 / 3) < 1e-12
    assert abs(roots.values()[1] - 2) < 1e-12


def test_triple_root_with_complex_coefficients():
    # (x - i)^3
    roots = complex_roots([1j, -3, -3j, 1])
    assert roots.multiplicity_hint == (3,)
    assert abs(roots.values()[0] - 1j) < 1e-4


def test_close_complex_roots_stay_separate():
    coeffs = np.poly([0.5, 0.501, -2.0 + 1j])[::-1]
    roots = complex_roots(list(coeffs))
    assert roots.is_simple()
    assert roots.distinct == 3


def _random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 4))


def test_random_polynomials_reexpand_to_their_coefficients():
    rng = random.Random(2024)
    for _ in range(200):
        multiplicities = {}
        for _ in range(rng.randint(1, 5)):
            multiplicities[_random_rational(rng)] = rng.randint(1, 3)
        poly = UnivariatePoly.from_roots([r for r, m in multiplicities.items() for _ in range(m)])
        roots = complex_roots(poly)
        assert roots.degree == poly.degree
        assert sorted(roots.multiplicity_hint) == sorted(multiplicities.values())
        for root, mult in zip(roots.values(), roots.multiplicity_hint):
            nearest = min(multiplicities, key=lambda r: abs(root - float(r)))
            assert abs(root - float(nearest)) < 1e-8
            assert multiplicities[nearest] == mult
        expected = np.array([float(c) for c in reversed(poly.monic().coeffs)])
        rebuilt = np.poly(roots.expanded())
        scale = max(1.0, float(np.max(np.abs(expected))))
        assert np.max(np.abs(rebuilt - expected)) <= 1e-8 * scale


def test_random_complex_polynomials_with_double_roots():
    rng = random.Random(99)
    for _ in range(50):
        simple = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        double = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(simple - double) < 0.5:
            continue
        roots = complex_roots(list(np.poly([double, double, simple])[::-1]))
        assert sorted(roots.multiplicity_hint) == [1, 2]
        rebuilt = np.poly(roots.expanded())
        assert np.max(np.abs(rebuilt - np.poly([double, double, simple]))) < 1e-6
