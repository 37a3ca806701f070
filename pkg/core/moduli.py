"""
点集的仿射模数
直线上固定 p 的同构恰为仿射映射 t ↦ a·t + b，因此"同模数"就是交点多重集的仿射等价
"""
import cmath
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import InsufficientSamplesError, SizeMismatchError
from .numkernel import DEFAULT_TOL, ComplexApprox, match_multisets
from .pencil import (
    DEFAULT_MAX_HEIGHT,
    PencilLine,
    PencilSetup,
    intersect,
    map_in_order,
    sample_lines,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AffineInvariants:
    """中心化后的初等对称函数 e_j 与比值 I_j = e_j^{j0} / e_{j0}^j"""
    size: int
    j0: Optional[int]
    values: Tuple[complex, ...]
    degenerate: bool
    centroid: complex
    elementary: Tuple[complex, ...]
    scale: float

    def distance(self, other: "AffineInvariants") -> float:
        """max_j |I_j − I'_j| / (1 + |I_j|)；类型不同返回无穷大"""
        if self.size != other.size or self.degenerate != other.degenerate or self.j0 != other.j0:
            return math.inf
        if not self.values:
            return 0.0
        return max(abs(a - b) / (1.0 + abs(a)) for a, b in zip(self.values, other.values))


def _values(points: Sequence) -> np.ndarray:
    return np.asarray(
        [p.value if isinstance(p, ComplexApprox) else complex(p) for p in points], dtype=complex
    )


def invariants(points: Sequence, tol: float = DEFAULT_TOL) -> AffineInvariants:
    """多重集的仿射不变量

    Args:
        points: 复数或 ComplexApprox 的序列
        tol: 容差；判定 e_j 是否为零时用 √tol·scale^j

    Returns:
        AffineInvariants，全部点重合时 degenerate=True
    """
    values = _values(points)
    size = len(values)
    if size == 0:
        return AffineInvariants(0, None, (), True, 0j, (), 0.0)
    centroid = complex(values.mean())
    centered = values - centroid
    spread = float(np.max(np.abs(centered)))
    reference = max(1.0, float(np.max(np.abs(values))))
    if spread <= math.sqrt(tol) * reference:
        return AffineInvariants(size, None, (), True, centroid, (), spread)

    # numpy.poly 给出 Π(x − c_i) 的系数，第 j 项为 (−1)^j e_j
    coeffs = np.poly(centered)
    elementary = tuple(complex(coeffs[j] * (-1) ** j) for j in range(size + 1))
    threshold = math.sqrt(tol)
    j0 = None
    for j in range(2, size + 1):
        if abs(elementary[j]) > threshold * spread ** j:
            j0 = j
            break
    if j0 is None:
        return AffineInvariants(size, None, (), True, centroid, elementary, spread)
    base = elementary[j0]
    values_out = tuple(complex(elementary[j] ** j0 / base ** j) for j in range(j0 + 1, size + 1))
    return AffineInvariants(size, j0, values_out, False, centroid, elementary, spread)


@dataclass(frozen=True)
class ModuliMatch:
    """同模数判定结果；same 为真时 (a, b, bijection) 是证书"""
    same: bool
    distance: float
    a: Optional[complex] = None
    b: Optional[complex] = None
    bijection: Optional[Tuple[int, ...]] = None


def same_moduli(first: Sequence, second: Sequence, tol: float = DEFAULT_TOL) -> ModuliMatch:
    """是否存在仿射映射 t ↦ a·t + b 把 first 送到 second（作为多重集，容差内）

    不变量只用来筛选；命中后对 e'_{j0} = a^{j0}·e_{j0} 的每个复根求 a，
    再由重心求 b，最后用二分匹配确认。
    """
    if len(first) != len(second):
        raise SizeMismatchError(f"多重集大小不同: {len(first)} 与 {len(second)}")
    left = _values(first)
    right = _values(second)
    inv_a = invariants(left, tol)
    inv_b = invariants(right, tol)
    distance = inv_a.distance(inv_b)
    threshold = math.sqrt(tol)

    if inv_a.degenerate and inv_b.degenerate:
        # 全部点重合：平移即可
        shift = inv_b.centroid - inv_a.centroid
        return ModuliMatch(True, 0.0, 1 + 0j, shift, tuple(range(len(left))))
    if inv_a.degenerate or inv_b.degenerate or distance > threshold:
        return ModuliMatch(False, distance)

    j0 = inv_a.j0
    ratio = inv_b.elementary[j0] / inv_a.elementary[j0]
    principal = cmath.exp(cmath.log(ratio) / j0)
    tolerance = threshold * max(1.0, float(np.max(np.abs(right))))
    for r in range(j0):
        a = principal * cmath.exp(2j * math.pi * r / j0)
        b = inv_b.centroid - a * inv_a.centroid
        perm = match_multisets(list(a * left + b), list(right), tolerance)
        if perm is not None:
            return ModuliMatch(True, distance, complex(a), complex(b), tuple(perm))
    return ModuliMatch(False, distance)


@dataclass(frozen=True)
class OracleVerdict:
    """抽样预言机的结论"""
    constant: bool
    samples_used: int
    worst_deviation: float
    threshold: float
    witness: Optional[Tuple[PencilLine, PencilLine]] = None
    lines: Tuple[PencilLine, ...] = ()


def constant_moduli_oracle(
    pencil: PencilSetup,
    samples: int = 12,
    seed: int = 1,
    tol: float = DEFAULT_TOL,
    workers: int = 1,
    max_height: int = DEFAULT_MAX_HEIGHT,
) -> OracleVerdict:
    """随机抽取一般直线，检查每条直线上的交点与第一条是否同模数

    与 weierstrass.decide 完全独立，只用到数值求根。
    """
    lines = sample_lines(pencil, samples, seed, max_height)
    if len(lines) < 2:
        raise InsufficientSamplesError(f"可用采样直线只有 {len(lines)} 条，至少需要 2 条")

    fibres: List[List[complex]] = map_in_order(
        lambda line: intersect(pencil, line, tol).expanded(), lines, workers
    )
    reference = fibres[0]
    worst = 0.0
    witness = None
    for line, points in zip(lines[1:], fibres[1:]):
        match = same_moduli(reference, points, tol)
        worst = max(worst, match.distance)
        if not match.same and witness is None:
            witness = (lines[0], line)
            logger.info(f"预言机: y0={lines[0].label()} 与 y0={line.label()} 模数不同")
    constant = witness is None
    logger.info(f"预言机结论: {'常模数' if constant else '非常模数'}（{len(lines)} 条直线，最大偏差 {worst:.3e}）")
    return OracleVerdict(constant, len(lines), worst, math.sqrt(tol), witness, tuple(lines))
