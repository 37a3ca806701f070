"""
数值内核
复数求根（Aberth–Ehrlich 同时迭代 + 牛顿修正）与带容差的点多重集匹配
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import IllConditionedError, InvalidInputError, SizeMismatchError, ZeroPolynomialError
from .exactpoly import UnivariatePoly, yun_squarefree

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
MAX_DEGREE = 64
MAX_ITERATIONS = 500
POLISH_STEPS = 6
# 初始圆上的角度偏移，避免与实轴对称的根重合
START_ANGLE = 0.4


@dataclass(frozen=True)
class ComplexApprox:
    """复数近似值及其前向误差估计"""
    re: float
    im: float
    err: float = 0.0

    @classmethod
    def of(cls, value: complex, err: float = 0.0) -> "ComplexApprox":
        value = complex(value)
        return cls(float(value.real), float(value.imag), float(err))

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)


@dataclass(frozen=True)
class RootSet:
    """根的多重集：互异根与对应的重数提示"""
    roots: Tuple[ComplexApprox, ...]
    multiplicity_hint: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(self.multiplicity_hint)

    @property
    def distinct(self) -> int:
        return len(self.roots)

    def values(self) -> List[complex]:
        return [r.value for r in self.roots]

    def expanded(self) -> List[complex]:
        """按重数展开的根列表"""
        out: List[complex] = []
        for root, mult in zip(self.roots, self.multiplicity_hint):
            out.extend([root.value] * mult)
        return out

    def is_simple(self) -> bool:
        return all(m == 1 for m in self.multiplicity_hint)


Coefficients = Union[UnivariatePoly, Sequence[complex]]


def _value(point) -> complex:
    return point.value if isinstance(point, ComplexApprox) else complex(point)


def _coefficient_array(f: Coefficients) -> np.ndarray:
    """低次在前的复系数数组；有理系数先按最大模缩放，避免浮点溢出"""
    if isinstance(f, UnivariatePoly):
        if f.is_zero():
            raise ZeroPolynomialError("零多项式没有根")
        scale = max(abs(c) for c in f.coeffs)
        return np.array([complex(float(c / scale)) for c in f.coeffs], dtype=complex)
    array = np.asarray(list(f), dtype=complex)
    nonzero = np.nonzero(array)[0]
    if nonzero.size == 0:
        raise ZeroPolynomialError("零多项式没有根")
    array = array[: nonzero[-1] + 1]
    return array / np.max(np.abs(array))


def _relative_residual(coeffs_high: np.ndarray, z: np.ndarray) -> np.ndarray:
    value = np.abs(np.polyval(coeffs_high, z))
    bound = np.polyval(np.abs(coeffs_high), np.abs(z))
    return value / np.where(bound > 0, bound, 1.0)


def _aberth(coeffs: np.ndarray) -> Tuple[np.ndarray, int]:
    """从固定初始圆出发的 Aberth–Ehrlich 迭代，返回 (近似根, 迭代次数)"""
    n = len(coeffs) - 1
    monic = coeffs / coeffs[-1]
    high = monic[::-1]
    dhigh = np.polyder(high)
    radius = max(abs(monic[n - k]) ** (1.0 / k) for k in range(1, n + 1))
    center = -monic[n - 1] / n
    angles = 2.0 * math.pi * np.arange(n) / n + START_ANGLE
    z = center + max(radius, 1e-3) * np.exp(1j * angles)
    if n == 1:
        return np.array([-monic[0]]), 0
    iterations = 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for iterations in range(1, MAX_ITERATIONS + 1):
            pz = np.polyval(high, z)
            dpz = np.polyval(dhigh, z)
            ratio = pz / dpz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            repulsion = np.sum(1.0 / diff, axis=1)
            step = ratio / (1.0 - ratio * repulsion)
            step[~np.isfinite(step)] = 0.0
            z = z - step
            if np.all(np.abs(step) <= 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(z))):
                break
            if np.all(_relative_residual(high, z) <= 4 * np.finfo(float).eps * n):
                break
    return z, iterations


def _newton_polish(coeffs_high: np.ndarray, z: complex) -> Tuple[complex, float]:
    deriv = np.polyder(coeffs_high)
    err = 0.0
    for _ in range(POLISH_STEPS):
        dz = np.polyval(deriv, z)
        if dz == 0:
            break
        step = np.polyval(coeffs_high, z) / dz
        z = z - step
        err = abs(step)
        if err <= np.finfo(float).eps * max(1.0, abs(z)):
            break
    return complex(z), float(err)


def _is_cluster(members: Sequence[complex], high: np.ndarray, tol: float) -> bool:
    """k 个近似值是否像同一个 k 重根：离散度不超过 tol^(1/k)，且中心处前 k 阶 Taylor 系数（相对）都很小"""
    k = len(members)
    center = complex(sum(members) / k)
    scale = max(1.0, abs(center))
    if max(abs(m - center) for m in members) > tol ** (1.0 / k) * scale:
        return False
    for j in range(k):
        derivative = np.polyder(high, j) if j else high
        value = abs(np.polyval(derivative, center))
        bound = np.polyval(np.abs(derivative), abs(center))
        if value > tol ** ((k - j) / k) * bound:
            return False
    return True


def _multiplicity_groups(points: Sequence[complex], high: np.ndarray, tol: float) -> List[List[int]]:
    """按重数分组：对每个剩余点，取离它最近的 k-1 个点，从大到小找第一个通过检验的 k"""
    remaining = list(range(len(points)))
    groups: List[List[int]] = []
    while remaining:
        first = remaining[0]
        others = sorted(remaining[1:], key=lambda i: abs(points[i] - points[first]))
        group = [first]
        for k in range(len(remaining), 1, -1):
            candidate = [first] + others[: k - 1]
            if _is_cluster([points[i] for i in candidate], high, tol):
                group = candidate
                break
        groups.append(sorted(group))
        remaining = [i for i in remaining if i not in group]
    return sorted(groups, key=lambda g: g[0])


def _solve(coeffs: np.ndarray, tol: float, grouped: bool) -> Tuple[RootSet, float, int]:
    """数值求根；grouped 为 False 时所有根按单根处理。返回 (根集, 最大相对残差, 迭代次数)"""
    degree = len(coeffs) - 1
    if degree == 0:
        return RootSet((), ()), 0.0, 0
    zero_count = int(np.argmax(coeffs != 0))
    core = coeffs[zero_count:]
    high = coeffs[::-1]
    approximations: List[complex] = [0j] * zero_count
    iterations = 0
    if len(core) > 1:
        found, iterations = _aberth(core)
        approximations.extend(complex(z) for z in found)

    if grouped:
        groups = _multiplicity_groups(approximations, high, tol)
    else:
        groups = [[i] for i in range(len(approximations))]
    roots: List[ComplexApprox] = []
    hints: List[int] = []
    worst = 0.0
    for group in groups:
        members = [approximations[i] for i in group]
        if len(group) == 1 and group[0] >= zero_count:
            value, err = _newton_polish(high, members[0])
            worst = max(worst, float(_relative_residual(high, np.array([value]))[0]))
        elif any(i < zero_count for i in group):
            value = 0j
            err = max(abs(m) for m in members)
        else:
            value = complex(sum(members) / len(members))
            err = max(abs(m - value) for m in members)
        roots.append(ComplexApprox.of(value, err))
        hints.append(len(group))
    return RootSet(tuple(roots), tuple(hints)), worst, iterations


def _sorted(roots: Sequence[ComplexApprox], hints: Sequence[int]) -> RootSet:
    order = sorted(range(len(roots)), key=lambda i: (roots[i].re, roots[i].im))
    return RootSet(tuple(roots[i] for i in order), tuple(hints[i] for i in order))


def complex_roots(f: Coefficients, tol: float = DEFAULT_TOL) -> RootSet:
    """全部复根及重数

    有理系数多项式先做 Yun 无平方分解，重数是精确的，每个无平方因子的根按单根求；
    复系数序列没有精确分解可用，k 个近似值只有在离散度不超过 tol^(1/k)
    且中心处低阶 Taylor 系数都足够小时才合并为一个 k 重根。

    Args:
        f: 有理系数多项式，或低次在前的复系数序列
        tol: 容差，相对残差上限

    Returns:
        RootSet，重数之和等于多项式次数
    """
    coeffs = _coefficient_array(f)
    degree = len(coeffs) - 1
    if degree > MAX_DEGREE:
        raise InvalidInputError(f"多项式次数 {degree} 超过上限 {MAX_DEGREE}")
    if degree == 0:
        return RootSet((), ())

    roots: List[ComplexApprox] = []
    hints: List[int] = []
    worst = 0.0
    iterations = 0
    if isinstance(f, UnivariatePoly):
        for factor, multiplicity in yun_squarefree(f):
            part, residual, steps = _solve(_coefficient_array(factor), tol, grouped=False)
            roots.extend(part.roots)
            hints.extend([multiplicity] * part.distinct)
            worst = max(worst, residual)
            iterations = max(iterations, steps)
    else:
        part, worst, iterations = _solve(coeffs, tol, grouped=True)
        roots.extend(part.roots)
        hints.extend(part.multiplicity_hint)

    result = _sorted(roots, hints)
    if worst > tol:
        if worst > math.sqrt(tol):
            raise IllConditionedError(
                f"求根未收敛: 相对残差 {worst:.3e}，迭代 {iterations} 次", partial=result
            )
        logger.debug(f"求根残差 {worst:.3e} 超过 tol 但在 √tol 以内，接受结果")
    return result


def _continued_fraction_convergents(value: Fraction, max_denominator: int) -> List[Fraction]:
    out: List[Fraction] = []
    h0, h1, k0, k1 = 0, 1, 1, 0
    x = value
    while True:
        a = math.floor(x)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > max_denominator:
            break
        out.append(Fraction(h1, k1))
        frac = x - a
        if frac == 0:
            break
        x = 1 / frac
    return out


def rational_roots(f: UnivariatePoly, tol: float = DEFAULT_TOL, max_denominator: int = 10 ** 9) -> List[Fraction]:
    """精确有理根：数值根的连分数渐近分数逐一精确验证"""
    if f.is_zero():
        raise ZeroPolynomialError("零多项式没有有限的根集合")
    found: List[Fraction] = []
    if f.degree <= 0:
        return found
    if f.coeffs[0] == 0:
        found.append(Fraction(0))
    ints, _ = f.to_integer()
    lead = abs(ints[-1])
    for root in complex_roots(f, tol).roots:
        if abs(root.im) > math.sqrt(tol) * max(1.0, abs(root.re)):
            continue
        if abs(root.re) > 1e15:
            continue
        for candidate in _continued_fraction_convergents(Fraction(root.re), max_denominator):
            if lead % candidate.denominator:
                continue
            if candidate not in found and f.evaluate(candidate) == 0:
                found.append(candidate)
                break
    return sorted(found)


def match_multisets(a: Sequence, b: Sequence, tol: float) -> Optional[List[int]]:
    """寻找双射 i ↦ perm[i]，使 |a_i - b_perm[i]| ≤ tol

    先贪心最近邻，失败后用增广路（Kuhn）二分匹配兜底。
    """
    if len(a) != len(b):
        raise SizeMismatchError(f"多重集大小不同: {len(a)} 与 {len(b)}")
    left = [_value(p) for p in a]
    right = [_value(p) for p in b]
    n = len(left)
    dist = [[abs(x - y) for y in right] for x in left]

    perm: List[int] = []
    used = set()
    for i in range(n):
        candidates = [j for j in range(n) if j not in used and dist[i][j] <= tol]
        if not candidates:
            break
        j = min(candidates, key=lambda c: dist[i][c])
        perm.append(j)
        used.add(j)
    if len(perm) == n:
        return perm

    adjacency = [sorted((j for j in range(n) if dist[i][j] <= tol), key=lambda c: dist[i][c]) for i in range(n)]
    owner: List[Optional[int]] = [None] * n

    def augment(i: int, seen: set) -> bool:
        for j in adjacency[i]:
            if j in seen:
                continue
            seen.add(j)
            if owner[j] is None or augment(owner[j], seen):
                owner[j] = i
                return True
        return False

    for i in range(n):
        if not augment(i, set()):
            return None
    result = [0] * n
    for j, i in enumerate(owner):
        result[i] = j
    return result
