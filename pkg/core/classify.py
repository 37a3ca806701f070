"""
低次几何分类
d=3 的四种情形与 d=4 的六种情形，由正规形分解出的几何分量、奇点类型与拐点数判定
"""
import cmath
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import reduce as fold
from typing import Dict, List, Tuple

import numpy as np

from .errors import InternalInconsistencyError, InvalidInputError
from .exactpoly import TernaryForm, perfect_power
from .numkernel import DEFAULT_TOL
from .pencil import normalize_point, setup, special_lines
from .singular import SingularityType, contact_order, point_label, singular_points
from .weierstrass import ConstantModuli, ModuliVerdict, WeierstrassData, verify_cyclic

logger = logging.getLogger(__name__)

# 过 p = [1:0:0] 的直线方向
PENCIL_DIRECTION = (Fraction(1), Fraction(0), Fraction(0))


class CaseId(Enum):
    """分类结果"""
    D3_CONCURRENT_LINES = "D3_CONCURRENT_LINES"
    D3_CONIC_LINE = "D3_CONIC_LINE"
    D3_CUSPIDAL = "D3_CUSPIDAL"
    D3_SMOOTH_J0 = "D3_SMOOTH_J0"
    D4_CONCURRENT_LINES = "D4_CONCURRENT_LINES"
    D4_TWO_CONICS = "D4_TWO_CONICS"
    D4_CUBIC_LINE = "D4_CUBIC_LINE"
    D4_CYCLIC_COVER = "D4_CYCLIC_COVER"
    D4_TACNODE = "D4_TACNODE"
    D4_TRIPLE_POINT = "D4_TRIPLE_POINT"
    UNCLASSIFIED = "UNCLASSIFIED"


DESCRIPTIONS: Dict[CaseId, str] = {
    CaseId.D3_CONCURRENT_LINES: "三条过同一点的直线",
    CaseId.D3_CONIC_LINE: "非奇异二次曲线 Q 与一条直线的并，p 是该直线关于 Q 的极点",
    CaseId.D3_CUSPIDAL: "尖点三次曲线",
    CaseId.D3_SMOOTH_J0: "j 不变量为 0 的光滑椭圆曲线",
    CaseId.D4_CONCURRENT_LINES: "四条共点直线的并",
    CaseId.D4_TWO_CONICS: "两条二次曲线的并",
    CaseId.D4_CUBIC_LINE: "三次曲线 E 与直线 L 的并",
    CaseId.D4_CYCLIC_COVER: "P^1 的 4 次循环覆盖，分歧于 4 点",
    CaseId.D4_TACNODE: "带两个 4 重拐点与一个切触点的四次曲线",
    CaseId.D4_TRIPLE_POINT: "带 y^3=x^4 型三重点的四次曲线",
    CaseId.UNCLASSIFIED: "未能归类",
}

# 由谓词推导出的正规形查找表：(有 X 因子, k, H 的根重数模式) → 情形
D4_TABLE: Dict[Tuple[bool, int, Tuple[int, ...]], CaseId] = {
    (False, 4, (1, 1, 1, 1)): CaseId.D4_CYCLIC_COVER,
    (False, 4, (1, 1, 2)): CaseId.D4_TACNODE,
    (False, 4, (1, 3)): CaseId.D4_TRIPLE_POINT,
    (False, 4, (2, 2)): CaseId.D4_TWO_CONICS,
    (False, 4, (4,)): CaseId.D4_CONCURRENT_LINES,
    (False, 2, (1, 1)): CaseId.D4_TWO_CONICS,
    (False, 2, (2,)): CaseId.D4_CONCURRENT_LINES,
    (False, 1, (1,)): CaseId.D4_CONCURRENT_LINES,
    (True, 3, (1, 1, 1)): CaseId.D4_CUBIC_LINE,
    (True, 3, (1, 2)): CaseId.D4_CUBIC_LINE,
    (True, 3, (3,)): CaseId.D4_CONCURRENT_LINES,
    (True, 1, (1,)): CaseId.D4_CONCURRENT_LINES,
}


@dataclass(frozen=True)
class ClassificationResult:
    case_id: CaseId
    description: str
    evidence: Dict[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class Components:
    """正规形在复数域上的分量：次数列表与各直线分量的系数向量"""
    degrees: Tuple[int, ...]
    lines: Tuple[Tuple[complex, complex, complex], ...]

    @property
    def pattern(self) -> Tuple[int, ...]:
        return tuple(sorted(self.degrees))

    def lines_concurrent(self, tol: float = DEFAULT_TOL) -> bool:
        if len(self.lines) < 3:
            return True
        matrix = np.array(self.lines, dtype=complex)
        return int(np.linalg.matrix_rank(matrix, tol=math.sqrt(tol))) <= 2


def components(verdict: ConstantModuli, tol: float = DEFAULT_TOL) -> Components:
    """[X·] Π (X^k − α_t H) 的不可约分量

    H = Π L_i^{e_i} 时 X^k − αH 分成 g = gcd(k, e_i) 个 k/g 次分量。
    """
    if verdict.H is None or verdict.m != 0:
        raise InvalidInputError("分量分解要求 m = 0 且正规形可表示")
    k = verdict.k
    H = verdict.H
    pattern = H.root_multiplicities()
    g = fold(math.gcd, pattern, k)
    degrees: List[int] = [1] if verdict.has_x_factor else []
    lines: List[Tuple[complex, complex, complex]] = [(1, 0, 0)] if verdict.has_x_factor else []
    alphas = verdict.alphas(tol).expanded()
    root = perfect_power(H, k) if g == k else None
    for alpha in alphas:
        degrees.extend([k // g] * g)
        if root is not None:
            lam, M = root
            base = cmath.exp(cmath.log(complex(alpha) * complex(lam)) / k)
            for j in range(k):
                gamma = base * cmath.exp(2j * math.pi * j / k)
                lines.append((1, -gamma * complex(M.coeffs[0]), -gamma * complex(M.coeffs[1])))
    return Components(tuple(degrees), tuple(lines))


def _flexes(curve: TernaryForm, contact: int, tol: float) -> List[str]:
    """过 p 的特殊直线上接触阶为 contact 的光滑特殊点"""
    pencil = setup(curve, (1, 0, 0))
    singular = [normalize_point(p.location) for p in singular_points(curve, tol)]
    found = []
    for special in special_lines(pencil, tol):
        if special.count != 1 or special.contact != contact or special.point is None:
            continue
        vec = normalize_point(special.point)
        if any(np.linalg.norm(np.cross(vec, s)) <= math.sqrt(tol) for s in singular):
            continue
        if contact_order(curve, special.point, PENCIL_DIRECTION, tol) != contact:
            logger.warning(f"特殊点 {point_label(special.point)} 的接触阶与交点重数不符")
            continue
        found.append(point_label(special.point))
    return found


def _require(verdict: ModuliVerdict, w: WeierstrassData, degree: int) -> ConstantModuli:
    if not verdict.constant:
        raise InvalidInputError("非常模数的曲线不在分类范围内")
    if w.d != degree:
        raise InvalidInputError(f"该分类只适用于 d={degree}，当前 d={w.d}")
    if w.m != 0:
        raise InvalidInputError(f"分类要求 m=0，当前 m={w.m}")
    if verdict.H is None:
        raise InternalInconsistencyError("m=0 时正规形必定可表示")
    return verdict


def classify_d3(verdict: ModuliVerdict, w: WeierstrassData, tol: float = DEFAULT_TOL) -> ClassificationResult:
    """三次情形：X³+F₃、X(X²+F₂) 或 X(X+F₁)(X+λF₁)"""
    v = _require(verdict, w, 3)
    distinct = len(v.H.root_multiplicities())
    curve = w.curve()
    evidence: Dict[str, object] = {
        "has_x_factor": v.has_x_factor,
        "k": v.k,
        "h_pattern": list(v.H.root_multiplicities()),
    }
    if v.has_x_factor:
        if v.k == 2 and distinct == 2:
            case = CaseId.D3_CONIC_LINE
            conic = curve.divide_by_x()
            polar = conic.partial(0)
            evidence["polar_is_line_component"] = polar.is_proportional(TernaryForm(1, {(1, 0, 0): 1}))
        else:
            case = CaseId.D3_CONCURRENT_LINES
    elif v.k == 3 and distinct == 2:
        case = CaseId.D3_CUSPIDAL
        cusps = [p for p in singular_points(curve, tol) if p.type_hint is SingularityType.CUSP_A2]
        evidence["cusps"] = [p.label() for p in cusps]
        evidence["cusp_on_x0"] = all(p.location[0] == 0 for p in cusps) and bool(cusps)
        evidence["flexes"] = _flexes(curve, 3, tol)
    elif v.k == 3 and distinct == 3:
        case = CaseId.D3_SMOOTH_J0
        evidence["flexes"] = _flexes(curve, 3, tol)
    else:
        case = CaseId.D3_CONCURRENT_LINES

    parts = components(v, tol)
    evidence["components"] = list(parts.pattern)
    if case is CaseId.D3_CONCURRENT_LINES:
        evidence["lines_concurrent"] = parts.lines_concurrent(tol)
    logger.info(f"d=3 分类: {case.value}")
    return ClassificationResult(case, DESCRIPTIONS[case], evidence)


def classify_d4(verdict: ModuliVerdict, w: WeierstrassData, tol: float = DEFAULT_TOL) -> ClassificationResult:
    """四次情形：先由分量、奇点与拐点谓词判定，再与查找表核对"""
    v = _require(verdict, w, 4)
    curve = w.curve()
    parts = components(v, tol)
    h_pattern = v.H.root_multiplicities()
    evidence: Dict[str, object] = {
        "has_x_factor": v.has_x_factor,
        "k": v.k,
        "h_pattern": list(h_pattern),
        "components": list(parts.pattern),
    }
    annotations: List[str] = []

    case = CaseId.UNCLASSIFIED
    if parts.pattern == (1, 1, 1, 1):
        concurrent = parts.lines_concurrent(tol)
        evidence["lines_concurrent"] = concurrent
        if concurrent:
            case = CaseId.D4_CONCURRENT_LINES
    elif parts.pattern == (2, 2):
        case = CaseId.D4_TWO_CONICS
    elif parts.pattern == (1, 3):
        case = CaseId.D4_CUBIC_LINE
        cubic = curve.divide_by_x() if v.has_x_factor else None
        if cubic is not None:
            flexes = _flexes(cubic, 3, tol)
            evidence["cubic_flexes_on_x0"] = flexes
            if len(h_pattern) == 3:
                annotations.append("E 光滑且 j(E)=0，L 经过 E 的三个共线拐点")
            else:
                annotations.append("E 为尖点三次曲线")
    elif parts.pattern == (4,):
        points = singular_points(curve, tol)
        evidence["singular_points"] = [{"point": p.label(), "type": p.type_hint.value} for p in points]
        types = {p.type_hint for p in points}
        evidence["flexes"] = _flexes(curve, 4, tol)
        if not points:
            case = CaseId.D4_CYCLIC_COVER
            evidence["cyclic_automorphism"] = verify_cyclic(curve, 4)
            annotations.append("4 个分歧点处的切线交于 p")
        elif types == {SingularityType.TACNODE_A3}:
            case = CaseId.D4_TACNODE
            annotations.append("正规化为 j=1728 的椭圆曲线")
        elif types == {SingularityType.Y3_X4}:
            case = CaseId.D4_TRIPLE_POINT
            annotations.append("亏格 0，只有一个 4 重拐点")

    table_case = D4_TABLE.get((v.has_x_factor, v.k, h_pattern))
    evidence["table_case"] = table_case.value if table_case else None
    evidence["table_agrees"] = table_case is case
    if table_case is not case:
        logger.warning(f"d=4 查找表给出 {table_case}，谓词给出 {case.value}")
    if annotations:
        evidence["annotations"] = annotations
    if case is CaseId.UNCLASSIFIED:
        logger.warning("d=4 谓词没有命中任何情形")
    logger.info(f"d=4 分类: {case.value}")
    return ClassificationResult(case, DESCRIPTIONS[case], evidence)


def classify(verdict: ModuliVerdict, w: WeierstrassData, tol: float = DEFAULT_TOL) -> ClassificationResult:
    if w.d == 3:
        return classify_d3(verdict, w, tol)
    if w.d == 4:
        return classify_d4(verdict, w, tol)
    raise InvalidInputError(f"只支持 d=3 与 d=4 的分类，当前 d={w.d}")
