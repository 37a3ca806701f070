"""
测试曲线生成器测试
"""
import math
import random
from functools import reduce as fold

import pytest

from core.corpus import (
    build_corpus,
    divisors,
    elliptic_family_coefficients,
    random_binary_form,
    random_constant_verdict,
    random_elliptic_pair,
    random_negative,
    random_positive,
)
from core.exactpoly import is_squarefree_in_x
from core.fibration import family_from_coefficients, j_constancy
from core.pencil import setup, special_lines
from core.weierstrass import decide, reduce


def test_divisors():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(7) == [1, 7]


def test_random_binary_form_is_primitive():
    rng = random.Random(3)
    for degree in range(1, 5):
        form = random_binary_form(rng, degree)
        assert form.degree == degree
        assert form == form.primitive()


@pytest.mark.parametrize("d", range(3, 9))
def test_constant_verdict_invariants(d):
    rng = random.Random(d)
    verdict = random_constant_verdict(rng, d)
    count = verdict.factor_count
    assert verdict.lambdas[0] == 1
    assert verdict.lambdas[count] != 0
    used = [t for t in range(1, count + 1) if verdict.lambdas[t] != 0]
    assert fold(math.gcd, used, 0) == 1
    if verdict.k == 1:
        assert verdict.lambdas[1] == 0
    companion = verdict.companion
    assert companion.gcd(companion.derivative()).degree == 0


def test_positive_curves_have_single_point_special_lines():
    rng = random.Random(17)
    for _ in range(4):
        item = random_positive(rng, max_degree=6)
        assert item.positive
        assert item.curve.x_degree == item.d
        lines = special_lines(setup(item.curve, (1, 0, 0)))
        assert all(s.count == 1 for s in lines)


def test_negative_curves_are_non_constant():
    rng = random.Random(23)
    for _ in range(4):
        item = random_negative(rng, max_degree=6)
        assert not item.positive
        assert is_squarefree_in_x(item.curve)
        assert not decide(reduce(setup(item.curve, (1, 0, 0)))).constant


def test_build_corpus_is_deterministic():
    first = build_corpus(5, 3, 3, max_degree=5)
    second = build_corpus(5, 3, 3, max_degree=5)
    assert [c.curve for c in first] == [c.curve for c in second]
    assert [c.positive for c in first] == [True] * 3 + [False] * 3


def test_random_elliptic_pairs_are_non_degenerate():
    rng = random.Random(8)
    for _ in range(20):
        f2, f3 = random_elliptic_pair(rng)
        assert f2.degree <= 2 and f3.degree <= 3
        fam = family_from_coefficients(elliptic_family_coefficients(f2, f3))
        assert fam.d == 3
        j_constancy(f2, f3)
