"""
测试曲线生成
由乘积正规形构造常模数曲线，加一个单项式扰动得到反例，另有椭圆族 (f2, f3) 的随机样本
"""
import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce as fold
from typing import Dict, List, Optional, Tuple

from .exactpoly import BinaryForm, TernaryForm, UnivariatePoly, is_squarefree_in_x
from .pencil import setup
from .weierstrass import ConstantModuli, decide, expand_normal_form, reduce

logger = logging.getLogger(__name__)

MAX_H_DEGREE = 6
COEFF_RANGE = 3
MAX_RETRIES = 200


@dataclass(frozen=True)
class CorpusCurve:
    """语料中的一条曲线，p 恒为 [1:0:0]"""
    curve: TernaryForm
    positive: bool
    d: int
    k: Optional[int] = None
    has_x_factor: bool = False
    H: Optional[BinaryForm] = None
    label: str = ""


def divisors(n: int) -> List[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def random_rational(rng: random.Random, nonzero: bool = False) -> Fraction:
    while True:
        value = Fraction(rng.randint(-COEFF_RANGE, COEFF_RANGE), rng.randint(1, 3))
        if value != 0 or not nonzero:
            return value


def random_binary_form(rng: random.Random, degree: int) -> BinaryForm:
    """整系数本原、首项为正的随机二元形式"""
    while True:
        form = BinaryForm(degree, tuple(rng.randint(-COEFF_RANGE, COEFF_RANGE) for _ in range(degree + 1)))
        if not form.is_zero():
            return form.primitive()


def _shapes(d: int) -> List[Tuple[int, bool]]:
    """可用的 (k, 有 X 因子)；k=1 时 λ_1=0，至少要 3 个因子才能让下标互素"""
    shapes = [(k, False) for k in divisors(d) if k <= MAX_H_DEGREE]
    shapes += [(k, True) for k in divisors(d - 1) if k <= MAX_H_DEGREE and d - 1 >= 2]
    return [(k, has_x) for k, has_x in shapes if k > 1 or d - int(has_x) >= 3]


def random_constant_verdict(
    rng: random.Random,
    d: int,
    k: Optional[int] = None,
    has_x: Optional[bool] = None,
) -> ConstantModuli:
    """随机的乘积正规形数据（m=0）

    λ_N ≠ 0、伴随多项式无重根、非零 λ_t 的下标 t 互素；k=1 时 λ_1=0 以保持 X^{d−1} 项为零。
    """
    shapes = _shapes(d)
    if k is None or has_x is None:
        k, has_x = rng.choice(shapes)
    d_eff = d - 1 if has_x else d
    count = d_eff // k
    H = random_binary_form(rng, k)
    for _ in range(MAX_RETRIES):
        lambdas: Dict[int, Fraction] = {0: Fraction(1)}
        for t in range(1, count + 1):
            lambdas[t] = random_rational(rng) if rng.random() < 0.7 else Fraction(0)
        if k == 1:
            lambdas[1] = Fraction(0)
        if lambdas[count] == 0:
            lambdas[count] = random_rational(rng, nonzero=True)
        used = [t for t in range(1, count + 1) if lambdas[t] != 0]
        if fold(math.gcd, used, 0) != 1:
            continue
        companion = UnivariatePoly(tuple(lambdas[count - i] for i in range(count + 1)))
        if companion.gcd(companion.derivative()).degree > 0:
            continue
        return ConstantModuli(k, d, 0, has_x, H, lambdas, companion)
    raise RuntimeError(f"无法为 d={d}, k={k} 生成正规形")


def random_positive(rng: random.Random, d: Optional[int] = None, max_degree: int = 8) -> CorpusCurve:
    d = d if d is not None else rng.randint(3, max_degree)
    verdict = random_constant_verdict(rng, d)
    curve = expand_normal_form(verdict)
    label = f"+ d={d} k={verdict.k}{' X' if verdict.has_x_factor else ''}"
    return CorpusCurve(curve, True, d, verdict.k, verdict.has_x_factor, verdict.H, label)


def random_negative(rng: random.Random, d: Optional[int] = None, max_degree: int = 8) -> CorpusCurve:
    """在正例的某个 X^{d−h}（2 ≤ h ≤ d−1）系数上加一个随机单项式，直到比例关系被破坏"""
    for _ in range(MAX_RETRIES):
        base = random_positive(rng, d, max_degree)
        d_cur = base.d
        h = rng.randint(2, d_cur - 1) if d_cur > 2 else 2
        b = rng.randint(0, h)
        monomial = TernaryForm(d_cur, {(d_cur - h, h - b, b): random_rational(rng, nonzero=True)})
        curve = base.curve + monomial
        if curve.x_degree != d_cur or not is_squarefree_in_x(curve):
            continue
        if decide(reduce(setup(curve, (1, 0, 0)))).constant:
            continue
        return CorpusCurve(curve, False, d_cur, label=f"- d={d_cur} slot={h}")
    raise RuntimeError("无法生成反例")


def build_corpus(seed: int, positives: int, negatives: int, max_degree: int = 8) -> List[CorpusCurve]:
    """确定性语料：先正例后反例"""
    rng = random.Random(seed)
    corpus = [random_positive(rng, max_degree=max_degree) for _ in range(positives)]
    corpus += [random_negative(rng, max_degree=max_degree) for _ in range(negatives)]
    logger.info(f"语料生成完成: {positives} 正例, {negatives} 反例")
    return corpus


def random_elliptic_pair(rng: random.Random) -> Tuple[UnivariatePoly, UnivariatePoly]:
    """deg f2 ≤ 2, deg f3 ≤ 3 的随机 (f2, f3)，约一半满足 j 恒定的构造"""
    while True:
        choice = rng.random()
        if choice < 0.3:
            u = UnivariatePoly((random_rational(rng), random_rational(rng, nonzero=True)))
            f2 = u * u * random_rational(rng, nonzero=True)
            f3 = u ** 3 * random_rational(rng, nonzero=True)
        elif choice < 0.4:
            f2 = UnivariatePoly()
            f3 = UnivariatePoly(tuple(random_rational(rng) for _ in range(4)))
        elif choice < 0.5:
            f2 = UnivariatePoly(tuple(random_rational(rng) for _ in range(3)))
            f3 = UnivariatePoly()
        else:
            f2 = UnivariatePoly(tuple(random_rational(rng) for _ in range(3)))
            f3 = UnivariatePoly(tuple(random_rational(rng) for _ in range(4)))
        disc = f2 ** 3 * 4 + f3 ** 2 * 27
        if disc.is_zero():
            continue
        return f2, f3


def elliptic_family_coefficients(f2: UnivariatePoly, f3: UnivariatePoly) -> Dict[int, UnivariatePoly]:
    """z^2 = x^3 + f2 x + f3 的系数表"""
    return {3: UnivariatePoly.constant(1), 1: f2, 0: f3}


__all__ = [
    "CorpusCurve",
    "build_corpus",
    "divisors",
    "elliptic_family_coefficients",
    "random_binary_form",
    "random_constant_verdict",
    "random_elliptic_pair",
    "random_negative",
    "random_positive",
]
