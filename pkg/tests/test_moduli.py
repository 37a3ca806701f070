"""
仿射模数与采样预言机测试
"""
import cmath
import math
import random

import pytest

from core.errors import SizeMismatchError
from core.moduli import constant_moduli_oracle, invariants, same_moduli
from core.parser import parse_form
from core.pencil import setup


def test_same_moduli_recovers_affine_map():
    match = same_moduli([0, 1, 2], [5, 7, 9])
    assert match.same
    assert abs(match.a - 2) < 1e-9
    assert abs(match.b - 5) < 1e-9
    assert sorted(match.bijection) == [0, 1, 2]


def test_same_moduli_with_rotation_and_permutation():
    first = [0, 1, 1j, 2 + 1j]
    a, b = cmath.exp(0.7j) * 1.5, 3 - 2j
    second = [a * z + b for z in reversed(first)]
    match = same_moduli(first, second)
    assert match.same
    assert abs(match.a - a) < 1e-8
    for i, j in enumerate(match.bijection):
        assert abs(match.a * first[i] + match.b - second[j]) < 1e-8


def test_different_moduli():
    match = same_moduli([0, 1, 3], [0, 1, 2])
    assert not match.same
    assert match.distance > 1e-3


def test_same_moduli_size_mismatch():
    with pytest.raises(SizeMismatchError):
        same_moduli([0, 1, 2], [0, 1])


def test_coincident_points_are_degenerate():
    inv = invariants([2, 2, 2])
    assert inv.degenerate
    match = same_moduli([2, 2, 2], [5, 5, 5])
    assert match.same
    assert abs(match.b - 3) < 1e-12


def test_symmetric_sets_use_higher_invariant():
    # 三次单位根：e_2 = 0，第一个非零的是 e_3
    roots = [cmath.exp(2j * cmath.pi * r / 3) for r in range(3)]
    inv = invariants(roots)
    assert inv.j0 == 3
    assert same_moduli(roots, [2 * z + 1 for z in roots]).same


def test_invariants_are_affine_invariant():
    points = [0, 1, 4, 2 + 3j]
    moved = [(-2 + 1j) * z + 7 for z in points]
    assert invariants(points).distance(invariants(moved)) < 1e-9


def test_oracle_accepts_fermat_cubic(fermat_pencil):
    verdict = constant_moduli_oracle(fermat_pencil, samples=8, seed=5)
    assert verdict.constant
    assert verdict.samples_used == 8
    assert verdict.witness is None


def test_oracle_rejects_non_constant_curve():
    pencil = setup(parse_form("X^3 + X*Z^2 + Y^3"), (1, 0, 0))
    verdict = constant_moduli_oracle(pencil, samples=8, seed=5)
    assert not verdict.constant
    assert verdict.witness is not None
    assert verdict.worst_deviation > verdict.threshold


def test_oracle_is_deterministic_with_workers():
    pencil = setup(parse_form("X^4 - Y^3*Z + Y*Z^3"), (1, 0, 0))
    serial = constant_moduli_oracle(pencil, samples=6, seed=11)
    threaded = constant_moduli_oracle(pencil, samples=6, seed=11, workers=4)
    assert serial == threaded
    assert serial.constant


def _random_points(rng: random.Random, size: int):
    return [complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(size)]


def _random_affine_image(rng: random.Random, points):
    a = cmath.rect(rng.uniform(0.5, 2.0), rng.uniform(0, 2 * math.pi))
    b = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
    image = [a * z + b for z in points]
    rng.shuffle(image)
    return image


def test_same_moduli_is_symmetric_and_transitive():
    rng = random.Random(41)
    checked = 0
    while checked < 50:
        first = _random_points(rng, rng.randint(3, 6))
        inv = invariants(first)
        if inv.j0 != 2 or abs(inv.elementary[2]) < 0.05 * inv.scale ** 2:
            continue
        second = _random_affine_image(rng, first)
        third = _random_affine_image(rng, second)
        for left, right in [(first, second), (second, first), (second, third), (first, third), (third, first)]:
            assert same_moduli(left, right).same
        other = _random_points(rng, len(first))
        assert same_moduli(first, other).same == same_moduli(other, first).same
        checked += 1
