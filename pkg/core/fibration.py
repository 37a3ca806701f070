"""
超椭圆曲线族
(C, p) 与 z^2 = x^d + Σ c_k(y) x^k 之间的对应、局部平凡性判定以及椭圆情形的 j 不变量判据
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import DegenerateFamilyError, InternalInconsistencyError, InvalidInputError
from .exactpoly import BinaryForm, TernaryForm, UnivariatePoly
from .pencil import setup
from .weierstrass import ModuliVerdict, WeierstrassData, decide, reduce

logger = logging.getLogger(__name__)

# 有理椭圆曲面解释下的次数条件，原样出现在诊断信息里
DEGREE_CONDITION = "3deg(f₂)+2deg(f₃)=6"
J_SAMPLE_POINTS = tuple(Fraction(n, 4) for n in (-9, -5, -3, -1, 1, 2, 3, 5, 7, 11))
J_RELATIVE_TOL = 1e-6
J_MIN_SAMPLES = 4


@dataclass(frozen=True)
class WeierstrassFamily:
    """z^2 = Σ c_k(y) x^k，规范形下 c_d = 1 且没有 c_{d−1}"""
    d: int
    coeffs: Dict[int, UnivariatePoly]

    @property
    def genus(self) -> int:
        return (self.d - 1) // 2

    @property
    def lead(self) -> UnivariatePoly:
        return self.coeffs.get(self.d, UnivariatePoly.constant(1))

    def coefficient(self, k: int) -> UnivariatePoly:
        if k == self.d:
            return self.lead
        return self.coeffs.get(k, UnivariatePoly())

    def to_text(self) -> str:
        terms: List[str] = []
        for k in range(self.d, -1, -1):
            poly = self.coefficient(k)
            if poly.is_zero():
                continue
            power = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if poly.degree == 0 and poly.lead == 1 and power:
                terms.append(power)
            elif not power:
                terms.append(f"({poly.to_text('y')})")
            else:
                terms.append(f"({poly.to_text('y')})*{power}")
        return "z^2 = " + (" + ".join(terms) if terms else "0")


def family_from_coefficients(coefficients: Dict[int, UnivariatePoly]) -> WeierstrassFamily:
    """由解析得到的 x^k 系数建立族（不做规范化）"""
    nonzero = {k: c for k, c in coefficients.items() if not c.is_zero()}
    if not nonzero:
        raise InvalidInputError("族方程右边为零")
    d = max(nonzero)
    coeffs = dict(nonzero)
    if coeffs[d] == UnivariatePoly.constant(1):
        del coeffs[d]
    return WeierstrassFamily(d, coeffs)


def family_from_pair(w: WeierstrassData) -> WeierstrassFamily:
    """c_k(y) = F_{m+d−k}(y, 1)"""
    coeffs = {}
    for h, form in w.F.items():
        if not form.is_zero():
            coeffs[w.d - h] = form.dehomogenize()
    return WeierstrassFamily(w.d, coeffs)


def pair_from_family(fam: WeierstrassFamily) -> WeierstrassData:
    """齐次化到 D = max(d, max_k(deg c_k + k))，p = [1:0:0]，再化为 (*) 形式"""
    total = max(fam.coefficient(k).degree + k for k in range(fam.d + 1) if not fam.coefficient(k).is_zero())
    total = max(total, fam.d)
    coefficients: Dict[int, BinaryForm] = {}
    for k in range(fam.d + 1):
        poly = fam.coefficient(k)
        if not poly.is_zero():
            coefficients[k] = poly.homogenize(total - k)
    curve = TernaryForm.from_x_coefficients(total, coefficients)
    logger.debug(f"族对应的平面曲线: {curve}（m={total - fam.d}）")
    return reduce(setup(curve, (1, 0, 0)))


def eliminate_quadratic_term(
    f1: UnivariatePoly, f2: UnivariatePoly, f3: UnivariatePoly
) -> Tuple[UnivariatePoly, UnivariatePoly]:
    """x = x' − f1/3 把 x^3 + f1 x^2 + f2 x + f3 化为 x'^3 + g2 x' + g3"""
    g2 = f2 - f1 * f1 * Fraction(1, 3)
    g3 = f3 - f1 * f2 * Fraction(1, 3) + f1 ** 3 * Fraction(2, 27)
    return g2, g3


@dataclass(frozen=True)
class JReport:
    """椭圆族 y^2 = x^3 + f2 x + f3 的 j 不变量是否恒定"""
    constant: bool
    value: Optional[Fraction]
    samples: Tuple[Tuple[Fraction, float], ...] = ()
    numeric_agrees: bool = True
    notes: Tuple[str, ...] = ()


def _j_value(f2: float, f3: float) -> float:
    cube = 4 * f2 ** 3
    return 1728 * cube / (cube + 27 * f3 ** 2)


def _j_sample_points(disc: UnivariatePoly) -> List[Fraction]:
    """预设采样点中不在判别式零点上的那些；不足 J_MIN_SAMPLES 个时依次追加 n/4（n = 13, 15, …）"""
    points = [t for t in J_SAMPLE_POINTS if disc.evaluate(t) != 0]
    n = 13
    while len(points) < J_MIN_SAMPLES:
        t = Fraction(n, 4)
        if disc.evaluate(t) != 0:
            points.append(t)
        n += 2
    return points


def j_constancy(f2: UnivariatePoly, f3: UnivariatePoly) -> JReport:
    """j 恒定 ⟺ f2^3 = c·f3^2 或 f2·f3 = 0

    取值由 j = 1728·4f2^3/(4f2^3 + 27f3^2) 给出，并在预设参数处数值核对；
    落在判别式零点上的参数跳过，剩余不足 J_MIN_SAMPLES 个时追加采样点。
    """
    disc = f2 ** 3 * 4 + f3 ** 2 * 27
    if disc.is_zero():
        raise DegenerateFamilyError("4f₂³+27f₃² 恒为零，所有纤维都奇异")
    notes: List[str] = []
    if f2.degree > 2 or f3.degree > 3:
        logger.warning(f"次数 ({f2.degree}, {f3.degree}) 超出 (2, 3)，不再是有理椭圆曲面；条件 {DEGREE_CONDITION} 未强制")
        notes.append(f"次数超出 (2, 3)；{DEGREE_CONDITION} 未强制")

    value: Optional[Fraction] = None
    if f2.is_zero():
        constant, value = True, Fraction(0)
    elif f3.is_zero():
        constant, value = True, Fraction(1728)
    else:
        cube = f2 ** 3
        square = f3 ** 2
        c = cube.lead / square.lead
        constant = cube == square * c
        if constant:
            value = Fraction(1728) * 4 * c / (4 * c + 27)

    points = _j_sample_points(disc)
    if any(t not in J_SAMPLE_POINTS for t in points):
        logger.warning("预设采样点大多落在判别式零点上，追加了采样点")
        notes.append("追加了预设之外的采样点")
    samples: List[Tuple[Fraction, float]] = []
    for t in points:
        samples.append((t, _j_value(float(f2.evaluate(t)), float(f3.evaluate(t)))))
    reference = samples[0][1]
    spread = max(abs(j - reference) / (1.0 + abs(reference)) for _, j in samples)
    numeric_constant = spread <= J_RELATIVE_TOL
    agrees = numeric_constant == constant
    if value is not None:
        agrees = agrees and abs(reference - float(value)) <= J_RELATIVE_TOL * (1.0 + abs(float(value)))
    if not agrees:
        logger.error(f"j 不变量的数值采样与符号判据不一致（相对偏差 {spread:.3e}）")
    return JReport(constant, value, tuple(samples), agrees, tuple(notes))


@dataclass(frozen=True)
class TrivialityVerdict:
    """局部平凡性结论"""
    isotrivial: bool
    family: WeierstrassFamily
    pair: WeierstrassData
    via_pair: ModuliVerdict
    j_report: Optional[JReport] = None
    notes: Tuple[str, ...] = field(default_factory=tuple)


def _elliptic_coefficients(fam: WeierstrassFamily, w: WeierstrassData) -> Tuple[UnivariatePoly, UnivariatePoly]:
    """三次族的 (f2, f3)：首项为常数时直接消去 x^2 项，否则取规范形"""
    lead = fam.lead
    if lead.degree == 0:
        scale = 1 / lead.lead
        return eliminate_quadratic_term(
            fam.coefficient(2) * scale, fam.coefficient(1) * scale, fam.coefficient(0) * scale
        )
    canonical = family_from_pair(w)
    return canonical.coefficient(1), canonical.coefficient(0)


def is_locally_trivial(fam: WeierstrassFamily) -> TrivialityVerdict:
    """族是局部平凡的 ⟺ 对应的 (C, p) 模数恒定；d=3 时再用 j 判据核对"""
    w = pair_from_family(fam)
    verdict = decide(w)
    report = None
    if fam.d == 3:
        f2, f3 = _elliptic_coefficients(fam, w)
        report = j_constancy(f2, f3)
        if report.constant != verdict.constant:
            raise InternalInconsistencyError(
                f"j 判据给出 {'恒定' if report.constant else '不恒定'}，与模数判定不一致"
            )
    logger.info(f"族 {fam.to_text()}: {'局部平凡' if verdict.constant else '非局部平凡'}")
    return TrivialityVerdict(verdict.constant, fam, w, verdict, report, report.notes if report else ())
