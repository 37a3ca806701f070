"""
(*) 形式、常模数判定与正规形测试
"""
import random
from dataclasses import replace
from fractions import Fraction

import pytest

from core.corpus import random_constant_verdict
from core.errors import NonReducedError, NonRepresentableError
from core.exactpoly import BinaryForm, UnivariatePoly
from core.parser import parse_form
from core.pencil import setup
from core.weierstrass import (
    ConstantModuli,
    automorphism_group,
    cyclic_generator,
    decide,
    expand_normal_form,
    reduce,
    verify_automorphism,
    verify_cyclic,
)


def _decide(text, point=(1, 0, 0)):
    w = reduce(setup(parse_form(text), point))
    return w, decide(w)


def test_reduce_removes_subleading_term():
    w = reduce(setup(parse_form("2*X^3 + 3*X^2*Y + Y^2*Z"), (1, 0, 0)))
    assert w.d == 3
    assert w.m == 0
    assert set(w.F) == {2, 3}
    curve = w.curve()
    assert curve.x_coefficient(3) == BinaryForm(0, (1,))
    assert curve.x_coefficient(2).is_zero()
    assert all(c.denominator == 1 for c in curve.terms.values())


def test_reduce_keeps_z_power_for_points_on_the_curve():
    w = reduce(setup(parse_form("X^3*Z + X*Y^3 + Y^4 + Z^4"), (1, 0, 0)))
    assert w.d == 3
    assert w.m == 1
    assert w.curve().x_coefficient(3) == BinaryForm.z_power(1)


def test_fermat_cubic_is_constant():
    w, verdict = _decide("X^3+Y^3+Z^3")
    assert verdict.constant
    assert verdict.k == 3
    assert not verdict.has_x_factor
    assert verdict.H.is_proportional(BinaryForm(3, (1, 0, 0, 1)))
    assert verdict.representable
    assert verdict.factor_count == 1


def test_non_constant_witness():
    _, verdict = _decide("X^3 + X*Z^2 + Y^3")
    assert not verdict.constant
    assert verdict.witness == (2, 3)


def test_x_factor_is_detected():
    _, verdict = _decide("X^3 + X*Y*Z")
    assert verdict.constant
    assert verdict.has_x_factor
    assert verdict.k == 2
    assert verdict.H.root_multiplicities() == (1, 1)


def test_decide_rejects_non_reduced_data():
    w = reduce(setup(parse_form("X^4 - Y^3*Z + Y*Z^3"), (1, 0, 0)))
    empty = replace(w, F={h: BinaryForm.zero(h) for h in (2, 3, 4)})
    with pytest.raises(NonReducedError):
        decide(empty)
    # F_4 = F_3 = 0 意味着 X^2 整除 G
    squared = replace(w, F={2: BinaryForm(2, (1, 0, 1)), 3: BinaryForm.zero(3), 4: BinaryForm.zero(4)})
    with pytest.raises(NonReducedError):
        decide(squared)


def test_constant_moduli_with_positive_m():
    # p 在曲线上：d=3, m=1
    _, verdict = _decide("X^3*Z + Y^4", (1, 0, 0))
    assert verdict.constant
    assert verdict.k == 3


def test_patterns_record_root_multiplicities():
    _, verdict = _decide("X^4 - Y^3*Z - Y^2*Z^2")
    assert verdict.constant
    assert verdict.patterns[4] == (1, 1, 2)


def test_expand_normal_form_of_fermat():
    verdict = ConstantModuli(
        k=3, d=3, m=0, has_x_factor=False, H=BinaryForm(3, (1, 0, 0, 1)),
        lambdas={0: Fraction(1), 1: Fraction(1)}, companion=UnivariatePoly((1, 1)),
    )
    assert expand_normal_form(verdict) == parse_form("X^3+Y^3+Z^3")


def test_expand_requires_representable_form():
    verdict = ConstantModuli(3, 3, 0, False, None, {}, None, reason="不可表示")
    with pytest.raises(NonRepresentableError):
        expand_normal_form(verdict)
    with pytest.raises(NonRepresentableError):
        verdict.alphas()


@pytest.mark.parametrize("seed", range(8))
def test_normal_form_round_trip(seed):
    rng = random.Random(seed)
    verdict = random_constant_verdict(rng, rng.randint(3, 7))
    again = decide(reduce(setup(expand_normal_form(verdict), (1, 0, 0))))
    assert again.constant
    assert again.k == verdict.k
    assert again.has_x_factor == verdict.has_x_factor
    assert again.H.is_proportional(verdict.H)


def test_alphas_are_companion_roots():
    _, verdict = _decide("X^4 - 5*X^2*Y*Z + 4*Y^2*Z^2")
    assert verdict.constant
    assert verdict.k == 2
    assert verdict.alphas().degree == verdict.factor_count


def test_verify_cyclic():
    assert verify_cyclic(parse_form("X^3+Y^3+Z^3"), 3)
    assert not verify_cyclic(parse_form("X^3+X*Y*Z+Y^3"), 3)
    assert verify_cyclic(parse_form("X^3+X*Y*Z"), 2)


def test_verify_automorphism_numeric_and_exact():
    fermat = parse_form("X^3+Y^3+Z^3")
    assert verify_automorphism(fermat, cyclic_generator(3))
    assert not verify_automorphism(fermat, cyclic_generator(2))
    swap = [[1, 0, 0], [0, 0, 1], [0, 1, 0]]
    assert verify_automorphism(fermat, swap)
    assert not verify_automorphism(parse_form("X^3+Y^2*Z"), swap)


def test_automorphism_group_shape():
    w, verdict = _decide("X^4 - Y^3*Z + Y*Z^3")
    report = automorphism_group(w, verdict)
    assert report.cyclic_order == 4
    assert report.cyclic_verified
    assert report.second_order == 1
    assert not report.second_verified
