"""
过 p 的直线束
坐标规范化、交点多重集、切线共点 T_ℓ、特殊直线与 T 轨迹
"""
import logging
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np

from .errors import (
    DegenerateLineError,
    InsufficientSamplesError,
    InvalidInputError,
    LineContainedError,
    NonReducedError,
    SingularPointError,
    UnsupportedDegreeError,
)
from .exactpoly import (
    BinaryForm,
    TernaryForm,
    UnivariatePoly,
    as_fraction,
    discriminant_in_x,
    format_fraction,
    is_squarefree_in_x,
    squarefree_factor,
    subresultant_in_x,
)
from .numkernel import DEFAULT_TOL, RootSet, complex_roots, rational_roots

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[Fraction, Fraction, Fraction], ...]
ProjectivePoint = Tuple[Union[Fraction, complex], ...]
ItemT = TypeVar("ItemT")
ResultT = TypeVar("ResultT")

DEFAULT_MAX_HEIGHT = 50


def _matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(3)), Fraction(0)) for j in range(3))
        for i in range(3)
    )


def apply_matrix(matrix: Sequence[Sequence], point: Sequence) -> tuple:
    return tuple(sum(matrix[i][k] * point[k] for k in range(3)) for i in range(3))


def normalize_point(point: Sequence) -> np.ndarray:
    """单位化复向量，并把模最大的分量旋转为正实数"""
    vec = np.asarray([complex(v) for v in point], dtype=complex)
    norm = np.linalg.norm(vec)
    if norm == 0:
        return vec
    vec = vec / norm
    pivot = vec[int(np.argmax(np.abs(vec)))]
    return vec * (abs(pivot) / pivot)


def map_in_order(fn: Callable[[ItemT], ResultT], items: Sequence[ItemT], workers: int = 1) -> List[ResultT]:
    """逐项计算，workers > 1 时用线程池；结果顺序与输入一致"""
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class PencilLine:
    """直线 Y = y0·Z；value 为 None 表示 Z = 0"""
    value: Optional[Union[Fraction, complex]] = None

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    @property
    def is_exact(self) -> bool:
        return self.value is None or isinstance(self.value, Fraction)

    def point(self, x) -> ProjectivePoint:
        """直线上 x 坐标为 x 的点（标准坐标）"""
        if self.value is None:
            return (x, Fraction(1), Fraction(0))
        return (x, self.value, Fraction(1))

    def sort_key(self) -> Tuple[int, float, float]:
        if self.value is None:
            return (1, 0.0, 0.0)
        v = complex(self.value)
        return (0, v.real, v.imag)

    def label(self) -> str:
        if self.value is None:
            return "inf"
        if isinstance(self.value, Fraction):
            return format_fraction(self.value)
        return format_complex(self.value)


def format_complex(value: complex, digits: int = 12) -> str:
    """确定性的复数文本，用于报告"""
    value = complex(value)
    re = float(f"{value.real:.{digits}g}") + 0.0
    im = float(f"{value.imag:.{digits}g}") + 0.0
    if im == 0:
        return f"{re:.{digits}g}"
    sign = "+" if im >= 0 else "-"
    return f"{re:.{digits}g}{sign}{abs(im):.{digits}g}i"


@dataclass(frozen=True)
class PencilSetup:
    """把 p 移到 [1:0:0] 后的曲线及其记录"""
    original: TernaryForm
    basepoint: Tuple[Fraction, Fraction, Fraction]
    to_standard: Matrix
    from_standard: Matrix
    curve: TernaryForm
    stripped: Tuple[Tuple[BinaryForm, int], ...]
    d: int
    m: int

    @cached_property
    def gradient(self) -> Tuple[TernaryForm, TernaryForm, TernaryForm]:
        return self.curve.gradient()

    @cached_property
    def discriminant(self) -> BinaryForm:
        return discriminant_in_x(self.curve)

    @cached_property
    def is_reduced(self) -> bool:
        return is_squarefree_in_x(self.curve)

    def to_original(self, point: Sequence) -> tuple:
        """标准坐标下的点映回原坐标"""
        return apply_matrix(self.from_standard, point)

    def restricted(self, line: PencilLine) -> Union[UnivariatePoly, List[complex]]:
        """G 在直线上的限制多项式；无理参数时返回复系数列表"""
        if line.is_exact:
            return self.curve.restrict_to_line(line.value)
        return [complex(c) for c in self.curve.restrict(complex(line.value), 1.0)]


def setup(curve: TernaryForm, p: Sequence) -> PencilSetup:
    """确定性坐标变换（置换后剪切）把 p 送到 [1:0:0]，并剥离过 p 的直线分支

    Args:
        curve: 曲线方程 G
        p: 有理射影点

    Returns:
        PencilSetup
    """
    if curve.is_zero():
        raise InvalidInputError("零多项式不能定义曲线")
    point = tuple(as_fraction(c) for c in p)
    if len(point) != 3 or all(c == 0 for c in point):
        raise InvalidInputError(f"无效的射影点: {p}")

    index = max(range(3), key=lambda i: (abs(point[i]), -i))
    perm = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    perm[0], perm[index] = perm[index], perm[0]
    a, b, c = apply_matrix(perm, point)
    shear = ((1, 0, 0), (-b / a, 1, 0), (-c / a, 0, 1))
    unshear = ((1, 0, 0), (b / a, 1, 0), (c / a, 0, 1))
    to_standard = _matmul([[as_fraction(v) for v in row] for row in shear], perm)
    from_standard = _matmul(perm, [[as_fraction(v) for v in row] for row in unshear])

    moved = curve.compose_linear(from_standard)
    content = moved.x_content()
    stripped: Tuple[Tuple[BinaryForm, int], ...] = ()
    if content.degree > 0:
        stripped = tuple(squarefree_factor(content)[1])
        moved = moved.divide_by_binary(content)
        logger.info(f"剥离过 p 的直线分支: {content}")
    if moved.x_content().degree > 0:
        raise InvalidInputError("剥离后曲线仍含过 p 的直线")

    d = moved.x_degree
    m = moved.degree - d
    if d <= 2:
        raise UnsupportedDegreeError(f"X 次数 d={d}，要求 d > 2")
    logger.debug(f"坐标变换完成: d={d}, m={m}")
    return PencilSetup(
        original=curve,
        basepoint=point,
        to_standard=to_standard,
        from_standard=from_standard,
        curve=moved,
        stripped=stripped,
        d=d,
        m=m,
    )


def intersect(pencil: PencilSetup, line: PencilLine, tol: float = DEFAULT_TOL) -> RootSet:
    """(C−{p})∩ℓ 的 x 坐标多重集"""
    restricted = pencil.restricted(line)
    if isinstance(restricted, UnivariatePoly):
        if restricted.is_zero():
            raise LineContainedError(f"直线 y0={line.label()} 整条落在曲线上")
        if restricted.degree == 0:
            return RootSet((), ())
    elif not any(abs(c) > 0 for c in restricted):
        raise LineContainedError(f"直线 y0={line.label()} 整条落在曲线上")
    return complex_roots(restricted, tol)


@dataclass(frozen=True)
class SpecialLine:
    """特殊直线：与 C−{p} 的互异交点少于 d 个"""
    line: PencilLine
    count: int
    exact: bool
    degree_drop: int = 0
    point: Optional[ProjectivePoint] = None
    contact: Optional[int] = None


def _single_root(coeffs: Sequence, degree: int):
    """只有一个根（重数 degree）时由次高项系数直接给出"""
    return -coeffs[degree - 1] / (degree * coeffs[degree])


def _exact_special(pencil: PencilSetup, line: PencilLine) -> SpecialLine:
    poly = pencil.curve.restrict_to_line(line.value)
    if poly.is_zero():
        raise LineContainedError(f"直线 y0={line.label()} 整条落在曲线上")
    n = poly.degree
    count = 0 if n == 0 else n - poly.gcd(poly.derivative()).degree
    point = None
    contact = None
    if count == 1:
        point = line.point(_single_root(poly.coeffs, n))
        contact = n
    if count == 0:
        logger.info(f"直线 y0={line.label()} 与 C 的交点全部落在 p")
    return SpecialLine(line, count, True, pencil.d - n, point, contact)


def _numeric_special(pencil: PencilSetup, line: PencilLine, tol: float) -> SpecialLine:
    coeffs = [complex(c) for c in pencil.curve.restrict(complex(line.value), 1.0)]
    scale = max(abs(c) for c in coeffs)
    while coeffs and abs(coeffs[-1]) <= math.sqrt(tol) * scale:
        coeffs.pop()
    n = len(coeffs) - 1
    if n <= 0:
        return SpecialLine(line, 0, False, pencil.d - max(n, 0))
    roots = complex_roots(coeffs, tol)
    point = line.point(_single_root(coeffs, n)) if roots.distinct == 1 else None
    return SpecialLine(line, roots.distinct, False, pencil.d - n, point, n if point else None)


def special_lines(pencil: PencilSetup, tol: float = DEFAULT_TOL) -> List[SpecialLine]:
    """所有满足 #(C−{p})∩ℓ < d 的直线及其精确互异点数

    有理参数直接精确计算；无理参数按主子结式系数把判别式的无平方部分
    逐层切开，每一层上 gcd(G, G_X) 的次数恒定，因此点数仍是精确的。
    """
    disc = pencil.discriminant
    if disc.is_zero():
        raise NonReducedError("关于 X 的判别式恒为零：曲线非既约或整族相切")
    found: List[SpecialLine] = []
    z_exp, finite_part = disc.strip_z()
    if z_exp:
        found.append(_exact_special(pencil, PencilLine(None)))

    remaining = finite_part.dehomogenize()
    if remaining.degree > 0:
        remaining = remaining.squarefree_part()
        for y0 in rational_roots(remaining, tol):
            found.append(_exact_special(pencil, PencilLine(y0)))
            remaining = remaining.exact_div(UnivariatePoly((-y0, 1)))

    if remaining.degree > 0:
        lead = pencil.curve.x_coefficient(pencil.d).dehomogenize()
        if lead.degree > 0:
            drop = remaining.gcd(lead)
            if drop.degree > 0:
                for root in complex_roots(drop, tol).values():
                    found.append(_numeric_special(pencil, PencilLine(root), tol))
                remaining = remaining.exact_div(drop)

    layer = 1
    while remaining.degree > 0 and layer < pencil.d:
        psc = subresultant_in_x(pencil.curve, layer).dehomogenize()
        common = remaining.monic() if psc.is_zero() else remaining.gcd(psc)
        piece = remaining.exact_div(common)
        count = pencil.d - layer
        if piece.degree > 0:
            for root in complex_roots(piece, tol).values():
                line = PencilLine(root)
                point = None
                if count == 1:
                    coeffs = [complex(c) for c in pencil.curve.restrict(root, 1.0)]
                    point = line.point(_single_root(coeffs, pencil.d))
                found.append(SpecialLine(line, count, True, 0, point, pencil.d if count == 1 else None))
        remaining = common
        layer += 1

    found.sort(key=lambda s: s.line.sort_key())
    logger.info(f"找到 {len(found)} 条特殊直线")
    return found


def is_generic_line(pencil: PencilSetup, y0: Fraction) -> bool:
    """限制多项式满次且无重根"""
    poly = pencil.curve.restrict_to_line(y0)
    return poly.degree == pencil.d and poly.gcd(poly.derivative()).degree == 0


def sample_lines(
    pencil: PencilSetup,
    count: int,
    seed: int,
    max_height: int = DEFAULT_MAX_HEIGHT,
) -> List[PencilLine]:
    """抽取小高度有理参数 y0 = a/b（|a|, b ≤ max_height），剔除特殊直线，按参数排序"""
    rng = random.Random(seed)
    seen = set()
    lines: List[PencilLine] = []
    attempts = 0
    limit = max(200, 50 * count)
    while len(lines) < count and attempts < limit:
        attempts += 1
        y0 = Fraction(rng.randint(-max_height, max_height), rng.randint(1, max_height))
        if y0 in seen:
            continue
        seen.add(y0)
        if is_generic_line(pencil, y0):
            lines.append(PencilLine(y0))
    if len(lines) < count:
        logger.warning(f"只抽到 {len(lines)}/{count} 条一般直线")
    return sorted(lines, key=lambda line: line.value)


@dataclass(frozen=True)
class TangentReport:
    """一条直线上各交点处的切线及其共点检验"""
    line: PencilLine
    points: RootSet
    tangent_lines: Tuple[Tuple[complex, complex, complex], ...]
    t_point: Tuple[complex, complex, complex]
    max_deviation: float
    concurrent: bool
    threshold: float


def concurrency_threshold(tol: float) -> float:
    """切线共点与 T 轨迹拟合共用的容差"""
    return math.sqrt(tol)


def _term_magnitude(form: TernaryForm, point: Sequence[complex]) -> float:
    """Σ|c|·|x|^a|y|^b|z|^c：form 在 point 处各单项的模之和"""
    sizes = [abs(v) for v in point]
    return float(sum(
        abs(float(c)) * sizes[0] ** a * sizes[1] ** b * sizes[2] ** e
        for (a, b, e), c in form.terms.items()
    ))


def tangent_point(pencil: PencilSetup, line: PencilLine, tol: float = DEFAULT_TOL) -> TangentReport:
    """各交点处切线的公共点 T_ℓ

    T_ℓ 取前两条切线的交点，其余切线用单位化后的 |⟨t, T⟩| 检验，
    偏差不超过 √tol 记为共点。有理直线上的交点重数是精确的，单交点必是光滑点；
    无理直线用梯度相对其各单项模之和的大小判断是否经过奇点。
    """
    roots = intersect(pencil, line, tol)
    if roots.distinct != pencil.d or not roots.is_simple():
        raise DegenerateLineError(
            f"直线 y0={line.label()} 上只有 {roots.distinct} 个互异交点（需要 {pencil.d} 个）"
        )
    threshold = concurrency_threshold(tol)
    tangents: List[np.ndarray] = []
    for x0 in roots.values():
        point = [complex(v) for v in line.point(x0)]
        grad = np.array([complex(g.evaluate(*point)) for g in pencil.gradient], dtype=complex)
        norm = float(np.linalg.norm(grad))
        if line.is_exact:
            singular = norm == 0
        else:
            scale = math.sqrt(sum(_term_magnitude(g, point) ** 2 for g in pencil.gradient))
            singular = norm <= threshold * scale
        if singular:
            raise SingularPointError(f"直线 y0={line.label()} 经过曲线的奇点 x={format_complex(x0)}")
        tangents.append(grad / norm)

    t_vec = np.cross(tangents[0], tangents[1])
    if np.linalg.norm(t_vec) <= math.sqrt(tol):
        best = max(
            ((i, j) for i in range(len(tangents)) for j in range(i + 1, len(tangents))),
            key=lambda ij: np.linalg.norm(np.cross(tangents[ij[0]], tangents[ij[1]])),
        )
        t_vec = np.cross(tangents[best[0]], tangents[best[1]])
    t_vec = normalize_point(t_vec)
    deviation = max(abs(complex(np.dot(t, t_vec))) for t in tangents)
    return TangentReport(
        line=line,
        points=roots,
        tangent_lines=tuple(tuple(complex(v) for v in t) for t in tangents),
        t_point=tuple(complex(v) for v in t_vec),
        max_deviation=float(deviation),
        concurrent=bool(deviation <= threshold),
        threshold=threshold,
    )


class LocusKind(Enum):
    """T 轨迹的类型"""
    POINT = "Point"
    LINE_X0 = "LineX0"
    SCATTERED = "Scattered"


@dataclass(frozen=True)
class SpecialPointCheck:
    """特殊点是否落在拟合出的 T 轨迹上"""
    line: PencilLine
    point: ProjectivePoint
    deviation: float
    on_locus: bool


@dataclass(frozen=True)
class TLocus:
    """T_ℓ 的轨迹判定结果"""
    kind: LocusKind
    reports: Tuple[TangentReport, ...]
    max_x: float
    spread: float
    fit_tolerance: float
    special_points: Tuple[SpecialPointCheck, ...] = ()
    skipped: int = 0

    @property
    def t_points(self) -> List[Tuple[complex, complex, complex]]:
        return [r.t_point for r in self.reports]

    @property
    def special_on_locus(self) -> bool:
        return all(c.on_locus for c in self.special_points)


def t_locus(
    pencil: PencilSetup,
    samples: int = 12,
    seed: int = 1,
    tol: float = DEFAULT_TOL,
    check_special: bool = True,
    workers: int = 1,
    max_height: int = DEFAULT_MAX_HEIGHT,
) -> TLocus:
    """在随机一般直线上计算 T_ℓ，判定其轨迹为一点、直线 X=0 或散乱

    点与直线的拟合容差为 √tol。散乱说明模数不为常数。
    """
    lines = sample_lines(pencil, samples, seed, max_height)

    def attempt(line: PencilLine) -> Optional[TangentReport]:
        try:
            return tangent_point(pencil, line, tol)
        except (DegenerateLineError, SingularPointError) as e:
            logger.debug(f"跳过直线: {e}")
            return None

    results = map_in_order(attempt, lines, workers)
    reports = tuple(r for r in results if r is not None)
    skipped = len(results) - len(reports)
    if len(reports) < 3:
        raise InsufficientSamplesError(f"可用采样直线只有 {len(reports)} 条，至少需要 3 条")

    fit_tol = concurrency_threshold(tol)
    vectors = [np.asarray(r.t_point) for r in reports]
    anchor = vectors[0]
    spread = max(float(np.linalg.norm(np.cross(v, anchor))) for v in vectors)
    max_x = max(abs(v[0]) for v in vectors)
    if not all(r.concurrent for r in reports):
        kind = LocusKind.SCATTERED
    elif spread <= fit_tol:
        kind = LocusKind.POINT
    elif max_x <= fit_tol:
        kind = LocusKind.LINE_X0
    else:
        kind = LocusKind.SCATTERED

    checks: List[SpecialPointCheck] = []
    if check_special and kind is not LocusKind.SCATTERED:
        for special in special_lines(pencil, tol):
            if special.point is None:
                continue
            vec = normalize_point(special.point)
            if kind is LocusKind.POINT:
                deviation = float(np.linalg.norm(np.cross(vec, anchor)))
            else:
                deviation = float(abs(vec[0]))
            checks.append(SpecialPointCheck(special.line, special.point, deviation, deviation <= fit_tol))
        if not all(c.on_locus for c in checks):
            logger.warning("存在不在 T 轨迹上的特殊点")

    logger.info(f"T 轨迹: {kind.value}（{len(reports)} 条直线，跳过 {skipped} 条）")
    return TLocus(kind, reports, float(max_x), spread, fit_tol, tuple(checks), skipped)
