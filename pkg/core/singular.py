"""
奇点分析
消元求奇点，局部展开得到重数与切锥，用牛顿多边形区分尖点、切触点与 y^3=x^4 型三重点
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from .errors import LineContainedError, NonReducedError
from .exactpoly import (
    BinaryForm,
    TernaryForm,
    UnivariatePoly,
    compose_terms,
    discriminant_in_x,
    format_fraction,
    squarefree_factor,
)
from .numkernel import DEFAULT_TOL, complex_roots, rational_roots
from .pencil import format_complex

logger = logging.getLogger(__name__)

Scalar = Union[Fraction, complex]
Local = Dict[Tuple[int, int], Scalar]

VARIABLE_NAMES = ("X", "Y", "Z")


class SingularityType(Enum):
    """奇点类型提示"""
    NODE = "NODE"
    CUSP_A2 = "CUSP_A2"
    TACNODE_A3 = "TACNODE_A3"
    ORDINARY_TRIPLE = "ORDINARY_TRIPLE"
    Y3_X4 = "Y3_X4"
    OTHER = "OTHER"


@dataclass(frozen=True)
class SingularPoint:
    """曲线的奇点：位置、重数、切锥与类型提示"""
    location: Tuple[Scalar, Scalar, Scalar]
    exact: bool
    multiplicity: int
    cone: Tuple[Tuple[str, int], ...]
    chart: Tuple[str, str]
    type_hint: SingularityType

    @property
    def cone_pattern(self) -> Tuple[int, ...]:
        return tuple(sorted(m for _, m in self.cone))

    def label(self) -> str:
        return point_label(self.location)


def point_label(point: Sequence[Scalar]) -> str:
    """射影点的文本，精确点除以最后一个非零坐标"""
    if all(isinstance(c, Fraction) for c in point):
        return "[" + ":".join(format_fraction(c) for c in _normalize_exact(point)) + "]"
    return "[" + ":".join(format_complex(c, 9) for c in _normalize_numeric(point)) + "]"


def _is_zero(value: Scalar, threshold: float) -> bool:
    if isinstance(value, Fraction):
        return value == 0
    return abs(value) <= threshold


def _normalize_exact(point: Sequence[Fraction]) -> Tuple[Fraction, Fraction, Fraction]:
    pivot = next(c for c in reversed(point) if c != 0)
    return tuple(c / pivot for c in point)


def _normalize_numeric(point: Sequence[complex]) -> Tuple[complex, complex, complex]:
    values = [complex(c) for c in point]
    pivot = max(values, key=abs)
    return tuple(v / pivot for v in values)


def local_expansion(G: TernaryForm, point: Sequence[Scalar]) -> Tuple[Local, Tuple[int, int, int]]:
    """在模最大坐标的仿射图中以 point 为原点展开

    Returns:
        ({(i, j): 系数 u^i v^j}, (图坐标下标, u 的下标, v 的下标))
    """
    exact = all(isinstance(c, Fraction) for c in point)
    chart = max(range(3), key=lambda i: (abs(point[i]), -i))
    others = [i for i in range(3) if i != chart]
    base = [c / point[chart] for c in point]
    # 新变量 (U, V, W)：原坐标 = base·W + U e_u + V e_v
    zero = Fraction(0) if exact else 0j
    one = Fraction(1) if exact else 1 + 0j
    matrix = []
    for i in range(3):
        row = [zero, zero, base[i]]
        if i == others[0]:
            row[0] = one
        elif i == others[1]:
            row[1] = one
        matrix.append(row)
    composed = compose_terms(dict(G.terms), matrix)
    local: Local = {}
    for (a, b, _), value in composed.items():
        if value != 0:
            local[(a, b)] = local.get((a, b), zero) + value
    return local, (chart, others[0], others[1])


def _substitute_line(local: Local, alpha: Scalar, beta: Scalar) -> Local:
    """使切锥直线 αu + βv 成为新坐标轴 v' = 0"""
    if abs(beta) < abs(alpha):
        swapped = {(j, i): value for (i, j), value in local.items()}
        return _substitute_line(swapped, beta, alpha)
    out: Local = {}
    for (i, j), value in local.items():
        # v = (v' − α u') / β
        scale = value / beta ** j
        for l in range(j + 1):
            coeff = scale * math.comb(j, l) * (-alpha) ** (j - l)
            key = (i + j - l, l)
            out[key] = out.get(key, 0) + coeff
    return out


def _cone_lines_exact(local: Local, r: int) -> Tuple[List[Tuple[BinaryForm, int]], List[Tuple[Fraction, Fraction]]]:
    """精确切锥的无平方分解，以及重数 ≥ 2 的线性因子 (α, β)"""
    cone = BinaryForm(r, tuple(local.get((r - i, i), Fraction(0)) for i in range(r + 1)))
    _, factors = squarefree_factor(cone)
    repeated = []
    for form, mult in factors:
        if mult >= 2 and form.degree == 1:
            repeated.append((form.coeffs[0], form.coeffs[1]))
    return factors, repeated


def _cone_lines_numeric(local: Local, r: int, radius: float) -> List[Tuple[Tuple[complex, complex], int]]:
    """数值切锥的直线 αu + βv 及重数"""
    coeffs = [complex(local.get((r - i, i), 0)) for i in range(r + 1)]
    scale = max(abs(c) for c in coeffs)
    # 形式 Σ coeffs[i] u^{r−i} v^i；u 方向的根用 t = u/v
    tail = 0
    while tail < r and abs(coeffs[tail]) <= radius * scale:
        tail += 1
    lines: List[Tuple[Tuple[complex, complex], int]] = []
    if tail:
        lines.append(((0j, 1 + 0j), tail))
    remaining = coeffs[tail:]
    if len(remaining) > 1:
        # Σ remaining[i] t^{r−tail−i}（t = u/v）的根 t0 对应直线 u − t0·v
        poly = list(reversed(remaining))
        roots = complex_roots(poly, radius ** 2)
        for root, mult in zip(roots.values(), roots.multiplicity_hint):
            lines.append(((1 + 0j, -root), mult))
    return lines


def _newton_type(local: Local, r: int, alpha: Scalar, beta: Scalar, threshold: float) -> SingularityType:
    moved = _substitute_line(local, alpha, beta)
    nonzero = {key: value for key, value in moved.items() if not _is_zero(value, threshold)}
    pure = [i for (i, j) in nonzero if j == 0]
    if not pure:
        return SingularityType.OTHER
    n = min(pure)
    if any(i * r + j * n < r * n for (i, j) in nonzero):
        return SingularityType.OTHER
    if r == 2 and n == 3:
        return SingularityType.CUSP_A2
    if r == 2 and n == 4:
        a = nonzero.get((0, 2), 0)
        b = nonzero.get((2, 1), 0)
        c = nonzero.get((4, 0), 0)
        if not _is_zero(b * b - 4 * a * c, threshold):
            return SingularityType.TACNODE_A3
        return SingularityType.OTHER
    if r == 3 and n == 4:
        return SingularityType.Y3_X4
    return SingularityType.OTHER


def analyze_point(G: TernaryForm, point: Sequence[Scalar], tol: float = DEFAULT_TOL) -> SingularPoint:
    """在给定奇点处计算重数、切锥与类型"""
    exact = all(isinstance(c, Fraction) for c in point)
    location = _normalize_exact(point) if exact else _normalize_numeric(point)
    local, (_, iu, iv) = local_expansion(G, location)
    scale = max(abs(v) for v in local.values()) if local else 1.0
    threshold = 0.0 if exact else tol ** 0.25 * float(scale)
    nonzero = {key: value for key, value in local.items() if not _is_zero(value, threshold)}
    r = min((i + j for (i, j) in nonzero), default=0)
    names = (VARIABLE_NAMES[iu], VARIABLE_NAMES[iv])

    hint = SingularityType.OTHER
    if exact:
        factors, repeated = _cone_lines_exact(nonzero, r)
        cone = tuple((form.to_text(names), mult) for form, mult in factors)
        pattern = sorted(m for form, mult in factors for m in [mult] * form.degree)
    else:
        lines = _cone_lines_numeric(nonzero, r, tol ** 0.25)
        cone = tuple(
            (f"{format_complex(a, 6)}*{names[0]}+({format_complex(b, 6)})*{names[1]}", mult)
            for (a, b), mult in lines
        )
        pattern = sorted(mult for _, mult in lines)
        repeated = [line for line, mult in lines if mult >= 2]

    if r == 2 and pattern == [1, 1]:
        hint = SingularityType.NODE
    elif r == 3 and pattern == [1, 1, 1]:
        hint = SingularityType.ORDINARY_TRIPLE
    elif r in (2, 3) and pattern == [r] and repeated:
        alpha, beta = repeated[0]
        hint = _newton_type(nonzero, r, alpha, beta, threshold)
    return SingularPoint(location, exact, r, cone, names, hint)


def _projection_matrix(G: TernaryForm) -> List[List[Fraction]]:
    """第一列 (1, a, b) 取不在曲线上的小整数点"""
    candidates = sorted(
        ((a, b) for a in range(-20, 21) for b in range(-20, 21)),
        key=lambda ab: (abs(ab[0]) + abs(ab[1]), ab),
    )
    for a, b in candidates:
        if G.evaluate(Fraction(1), Fraction(a), Fraction(b)) != 0:
            return [
                [Fraction(1), Fraction(0), Fraction(0)],
                [Fraction(a), Fraction(1), Fraction(0)],
                [Fraction(b), Fraction(0), Fraction(1)],
            ]
    raise NonReducedError("找不到不在曲线上的投影中心")


def _common_roots(polys: Sequence[UnivariatePoly], tol: float) -> Tuple[List[Fraction], List[complex]]:
    """一组多项式的公共根：有理根精确，其余数值"""
    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        raise NonReducedError("整条直线都是奇点，曲线不是既约的")
    common = nonzero[0]
    for p in nonzero[1:]:
        common = common.gcd(p)
    common = common.monic()
    if common.degree <= 0:
        return [], []
    common = common.squarefree_part()
    exact = rational_roots(common, tol)
    for root in exact:
        common = common.exact_div(UnivariatePoly((-root, 1)))
    numeric = complex_roots(common, tol).values() if common.degree > 0 else []
    return exact, numeric


def singular_points(G: TernaryForm, tol: float = DEFAULT_TOL) -> List[SingularPoint]:
    """解 ∂G/∂X = ∂G/∂Y = ∂G/∂Z = 0

    从不在曲线上的点 [1:a:b] 投影：奇点都落在关于 X 的判别式为零的直线上，
    有理直线上精确求偏导的公因式，无理直线上数值检验梯度。
    """
    if G.is_zero():
        raise NonReducedError("零多项式")
    matrix = _projection_matrix(G)
    moved = G.compose_linear(matrix)
    partials = moved.gradient()
    disc = discriminant_in_x(moved)
    if disc.is_zero():
        raise NonReducedError("关于 X 的判别式恒为零，曲线不是既约的")

    found: List[Tuple[Sequence[Scalar], bool]] = []
    z_exp, finite = disc.strip_z()
    if z_exp:
        restricted = [p.restrict_to_line(None) for p in partials]
        exact_x, numeric_x = _common_roots(restricted, tol)
        found.extend(((x, Fraction(1), Fraction(0)), True) for x in exact_x)
        found.extend(((x, 1 + 0j, 0j), False) for x in numeric_x)

    lines = finite.dehomogenize()
    if lines.degree > 0:
        lines = lines.squarefree_part()
        for y0 in rational_roots(lines, tol):
            restricted = [p.restrict_to_line(y0) for p in partials]
            exact_x, numeric_x = _common_roots(restricted, tol)
            found.extend(((x, y0, Fraction(1)), True) for x in exact_x)
            found.extend(((x, complex(y0), 1 + 0j), False) for x in numeric_x)
            lines = lines.exact_div(UnivariatePoly((-y0, 1)))
        if lines.degree > 0:
            found.extend(_numeric_candidates(moved, partials, lines, tol))

    points: List[SingularPoint] = []
    for point, exact in found:
        if exact:
            original = tuple(sum(matrix[i][k] * point[k] for k in range(3)) for i in range(3))
        else:
            original = tuple(
                sum(complex(matrix[i][k]) * complex(point[k]) for k in range(3)) for i in range(3)
            )
        points.append(analyze_point(G, original, tol))
    points.sort(key=_sort_key)
    logger.info(f"找到 {len(points)} 个奇点")
    return points


def _numeric_candidates(
    moved: TernaryForm,
    partials: Sequence[TernaryForm],
    lines: UnivariatePoly,
    tol: float,
) -> List[Tuple[Tuple[complex, complex, complex], bool]]:
    """无理直线上的奇点：限制多项式的重根处梯度（相对）足够小"""
    out = []
    threshold = tol ** 0.25
    scale = float(max(abs(v) for v in moved.terms.values()))
    for y0 in complex_roots(lines, tol).values():
        coeffs = [complex(c) for c in moved.restrict(y0, 1.0)]
        roots = complex_roots(coeffs, tol)
        for x0, mult in zip(roots.values(), roots.multiplicity_hint):
            if mult < 2:
                continue
            point = (x0, y0, 1 + 0j)
            size = max(abs(v) for v in point)
            bound = scale * moved.degree * size ** (moved.degree - 1) * len(moved.terms)
            grad = np.array([complex(p.evaluate(*point)) for p in partials])
            if np.linalg.norm(grad) <= threshold * bound:
                out.append((point, False))
    return out


def _sort_key(point: SingularPoint) -> Tuple:
    return tuple(
        v for c in point.location for v in (round(complex(c).real, 9), round(complex(c).imag, 9))
    )


def contact_order(
    G: TernaryForm,
    point: Sequence[Scalar],
    direction: Sequence[Scalar],
    tol: float = DEFAULT_TOL,
) -> int:
    """过 point 与 direction 的直线在 point 处与 C 的相交重数

    展开 G(point + s·direction)，返回 s = 0 处的零点阶数。
    """
    exact = all(isinstance(c, Fraction) for c in list(point) + list(direction))
    if not exact:
        point = [complex(c) for c in point]
        direction = [complex(c) for c in direction]
    zero = Fraction(0) if exact else 0j
    # 新变量 (S, W, ·)：原坐标 = direction·S + point·W
    matrix = [[direction[i], point[i], zero] for i in range(3)]
    composed = compose_terms(dict(G.terms), matrix)
    series: Dict[int, Scalar] = {}
    for (a, _, _), value in composed.items():
        series[a] = series.get(a, zero) + value
    scale = max((abs(v) for v in series.values()), default=0)
    threshold = 0.0 if exact else math.sqrt(tol) * float(scale)
    orders = [a for a, value in series.items() if not _is_zero(value, threshold)]
    if not orders:
        raise LineContainedError("直线整条落在曲线上")
    return min(orders)
