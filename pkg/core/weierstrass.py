"""
广义 Weierstrass 形式
把 (C, p) 化为 Z^m·X^d + Σ F_{m+h}·X^{d−h}，用两两成比例判据判定常模数，并给出乘积正规形
"""
import cmath
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce as fold
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import (
    DivisibilityError,
    InternalInconsistencyError,
    NonReducedError,
    NonRepresentableError,
)
from .exactpoly import (
    BinaryForm,
    TernaryForm,
    UnivariatePoly,
    compose_terms,
    is_squarefree_in_x,
    perfect_power,
)
from .numkernel import DEFAULT_TOL, RootSet, complex_roots
from .pencil import Matrix, PencilSetup

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoordinateChange:
    """原坐标到 (*) 形式的复合变换

    先做线性变换 matrix（p ↦ [1:0:0]），再在 Z=1 的图上做
    x ↦ denominator·(scaling(y)·x + shift(y))。
    """
    matrix: Matrix
    inverse: Matrix
    scaling: UnivariatePoly
    shift: UnivariatePoly
    denominator: int


@dataclass(frozen=True)
class WeierstrassData:
    """(*) 形式：F[h] 是 X^{d−h} 的系数，次数 m+h"""
    d: int
    m: int
    F: Dict[int, BinaryForm]
    stripped: Tuple[Tuple[BinaryForm, int], ...]
    coord_change: CoordinateChange
    reduced: bool = True

    @property
    def degree(self) -> int:
        return self.d + self.m

    def nonzero(self) -> List[int]:
        return sorted(h for h, form in self.F.items() if not form.is_zero())

    def curve(self) -> TernaryForm:
        """重建 G = Z^m·X^d + Σ F_{m+h}·X^{d−h}"""
        coefficients = {self.d: BinaryForm.z_power(self.m)}
        for h, form in self.F.items():
            if not form.is_zero():
                coefficients[self.d - h] = form
        return TernaryForm.from_x_coefficients(self.degree, coefficients)


def _shift_coefficients(coeffs: Sequence[UnivariatePoly], shift: UnivariatePoly) -> List[UnivariatePoly]:
    """Σ a_k x^k 在 x ↦ x − shift 下的新系数"""
    degree = len(coeffs) - 1
    out = [UnivariatePoly() for _ in range(degree + 1)]
    neg = -shift
    for k, a in enumerate(coeffs):
        if a.is_zero():
            continue
        for j in range(k + 1):
            out[j] = out[j] + a * neg ** (k - j) * math.comb(k, j)
    return out


def reduce(pencil: PencilSetup) -> WeierstrassData:
    """化为 (*) 形式

    Z=1 图上：乘以 c_d^{d−1} 并令 x ↦ x/c_d 使首项为 1，再平移消去 x^{d−1}，
    最后用公分母 L 作 x ↦ x/L 使系数为整数，重新齐次化到最小次数。
    """
    G = pencil.curve
    d = pencil.d
    coeffs = [G.x_coefficient(k).dehomogenize() for k in range(d + 1)]
    lead = coeffs[d]
    scaled = [coeffs[k] * lead ** (d - 1 - k) for k in range(d)] + [UnivariatePoly.constant(1)]
    shift = scaled[d - 1] * Fraction(1, d)
    shifted = _shift_coefficients(scaled, shift)
    if not shifted[d - 1].is_zero():
        raise InternalInconsistencyError("平移后 X^{d-1} 项没有消去")

    denominator = 1
    for poly in shifted[:d]:
        for c in poly.coeffs:
            denominator = denominator * c.denominator // math.gcd(denominator, c.denominator)
    integral = [shifted[k] * denominator ** (d - k) for k in range(d)] + [shifted[d]]

    total = max([d] + [integral[k].degree + k for k in range(d) if not integral[k].is_zero()])
    m = total - d
    F = {h: integral[d - h].homogenize(m + h) if not integral[d - h].is_zero() else BinaryForm.zero(m + h)
         for h in range(2, d + 1)}

    change = CoordinateChange(
        matrix=pencil.to_standard,
        inverse=pencil.from_standard,
        scaling=lead,
        shift=shift,
        denominator=denominator,
    )
    data = WeierstrassData(d=d, m=m, F=F, stripped=pencil.stripped, coord_change=change)
    curve = data.curve()
    if all(exps[2] > 0 for exps in curve.terms):
        raise InternalInconsistencyError("化简结果被 Z 整除")
    if curve.x_content().degree > 0:
        raise InternalInconsistencyError("化简结果仍含过 p 的直线")
    reduced = is_squarefree_in_x(curve)
    if not reduced:
        logger.warning("化简后的曲线关于 X 不是无平方的，输入可能不是既约曲线")
    logger.info(f"化为 (*) 形式: d={d}, m={m}, 非零 F 的下标 {data.nonzero()}")
    return WeierstrassData(d=d, m=m, F=F, stripped=pencil.stripped, coord_change=change, reduced=reduced)


@dataclass(frozen=True)
class ConstantModuli:
    """常模数：G = [X·] Σ_t λ_t H^t X^{k(N−t)} Z^{e_t}，N = d'/k"""
    k: int
    d: int
    m: int
    has_x_factor: bool
    H: Optional[BinaryForm]
    lambdas: Dict[int, Fraction]
    companion: Optional[UnivariatePoly]
    patterns: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    reason: Optional[str] = None

    constant = True

    @property
    def effective_degree(self) -> int:
        return self.d - 1 if self.has_x_factor else self.d

    @property
    def factor_count(self) -> int:
        return self.effective_degree // self.k

    @property
    def representable(self) -> bool:
        return self.H is not None

    def alphas(self, tol: float = DEFAULT_TOL) -> RootSet:
        """伴随多项式的根 α_t"""
        if self.companion is None:
            raise NonRepresentableError(self.reason or "H 不能在有理数上表示")
        return complex_roots(self.companion, tol)


@dataclass(frozen=True)
class NonConstantModuli:
    """非常模数：witness=(h, j) 处比例关系不成立"""
    witness: Tuple[int, int]

    constant = False


ModuliVerdict = Union[ConstantModuli, NonConstantModuli]


def _z_exponent(d_eff: int, t: int, k: int, m: int) -> Optional[int]:
    numerator = (d_eff - t * k) * m
    if numerator % d_eff:
        return None
    return numerator // d_eff


def decide(w: WeierstrassData) -> ModuliVerdict:
    """常模数判定

    k = gcd{h : F_{m+h} ≠ 0}；对所有非零下标 h < j 检验
    F_{m+h}^j 与 Z^{m(j−h)}·F_{m+j}^h 成比例。全部通过后再提取 H 与 λ_t。
    """
    hs = w.nonzero()
    if not hs:
        raise NonReducedError("所有 F 均为零，G = Z^m·X^d 不是既约曲线")
    has_x = w.F[w.d].is_zero()
    d_eff = w.d
    if has_x:
        if w.F[w.d - 1].is_zero():
            raise NonReducedError("X^2 整除 G，曲线不是既约的")
        d_eff = w.d - 1

    k = fold(math.gcd, hs)
    for i, h in enumerate(hs):
        for j in hs[i + 1:]:
            lhs = w.F[h] ** j
            rhs = BinaryForm.z_power(w.m * (j - h)) * w.F[j] ** h
            if not lhs.is_proportional(rhs):
                logger.info(f"比例关系在 (h, j)=({h}, {j}) 处不成立：非常模数")
                return NonConstantModuli((h, j))

    patterns = {h: w.F[h].root_multiplicities() for h in hs}

    def fallback(reason: str) -> ConstantModuli:
        logger.warning(f"常模数，但正规形不能在有理数上表示: {reason}")
        return ConstantModuli(k, w.d, w.m, has_x, None, {}, None, patterns, reason)

    parts: Dict[int, BinaryForm] = {}
    for h in hs:
        t = h // k
        exponent = _z_exponent(d_eff, t, k, w.m)
        if exponent is None:
            return fallback(f"Z 的指数 ({d_eff}-{t}·{k})·{w.m}/{d_eff} 不是整数")
        try:
            parts[t] = w.F[h].exact_div(BinaryForm.z_power(exponent))
        except DivisibilityError:
            return fallback(f"F_{{m+{h}}} 不被 Z^{exponent} 整除")

    t_min = min(parts)
    extracted = perfect_power(parts[t_min], t_min)
    if extracted is None:
        return fallback(f"F_{{m+{t_min * k}}} 不是有理形式的 {t_min} 次幂")
    _, H = extracted

    lambdas: Dict[int, Fraction] = {0: Fraction(1)}
    count = d_eff // k
    for t in range(1, count + 1):
        if t not in parts:
            lambdas[t] = Fraction(0)
            continue
        power = H ** t
        if power.degree != parts[t].degree:
            return fallback(f"H^{t} 的次数与 F 不符")
        lam = parts[t].lead / power.lead
        if power * lam != parts[t]:
            return fallback(f"F_{{m+{t * k}}} 不是 H^{t} 的倍数")
        lambdas[t] = lam
    companion = UnivariatePoly(tuple(lambdas[count - i] for i in range(count + 1)))
    logger.info(f"常模数: k={k}, H={H}, X 因子={'有' if has_x else '无'}")
    return ConstantModuli(k, w.d, w.m, has_x, H, lambdas, companion, patterns)


def expand_normal_form(verdict: ConstantModuli) -> TernaryForm:
    """展开 [X·] Σ_t λ_t H^t X^{k(N−t)} Z^{(d'−tk)m/d'}"""
    if verdict.H is None:
        raise NonRepresentableError(verdict.reason or "H 不能在有理数上表示")
    d_eff = verdict.effective_degree
    k = verdict.k
    count = verdict.factor_count
    shift = 1 if verdict.has_x_factor else 0
    total = verdict.d + verdict.m
    coefficients: Dict[int, BinaryForm] = {}
    for t, lam in verdict.lambdas.items():
        if lam == 0:
            continue
        exponent = _z_exponent(d_eff, t, k, verdict.m)
        if exponent is None:
            raise NonRepresentableError(f"Z 的指数 ({d_eff}-{t}·{k})·{verdict.m}/{d_eff} 不是整数")
        coefficients[k * (count - t) + shift] = verdict.H ** t * BinaryForm.z_power(exponent) * lam
    return TernaryForm.from_x_coefficients(total, coefficients)


def verify_cyclic(G: TernaryForm, k: int) -> bool:
    """[X:Y:Z] ↦ [ζ_k X:Y:Z] 是否保持 G：等价于所有 X 指数模 k 同余于 deg_X G"""
    if k < 1:
        return False
    d = G.x_degree
    return all((exps[0] - d) % k == 0 for exps in G.terms)


def cyclic_generator(k: int) -> Tuple[Tuple[complex, complex, complex], ...]:
    zeta = cmath.exp(2j * math.pi / k)
    return ((zeta, 0, 0), (0, 1, 0), (0, 0, 1))


def verify_automorphism(G: TernaryForm, matrix: Sequence[Sequence], tol: float = DEFAULT_TOL) -> bool:
    """G∘M 是否与 G 成比例；有理矩阵精确判定，复矩阵在容差内判定"""
    exact = all(isinstance(v, (int, Fraction)) for row in matrix for v in row)
    if exact:
        return G.compose_linear(matrix).is_proportional(G)
    composed = compose_terms(dict(G.terms), [[complex(v) for v in row] for row in matrix])
    pivot, reference = max(G.terms.items(), key=lambda item: abs(item[1]))
    factor = composed.get(pivot, 0) / complex(reference)
    if abs(factor) <= tol:
        return False
    scale = float(abs(reference))
    keys = set(composed) | set(G.terms)
    deviation = max(abs(composed.get(e, 0) - factor * complex(G.terms.get(e, 0))) for e in keys)
    return deviation <= tol * scale * max(1.0, abs(factor))


@dataclass(frozen=True)
class AutomorphismReport:
    """Z/k × Z/N 的群形状，只有 Z/k 因子经过验证"""
    cyclic_order: int
    cyclic_verified: bool
    second_order: int
    second_verified: bool = False


def automorphism_group(w: WeierstrassData, verdict: ConstantModuli) -> AutomorphismReport:
    curve = w.curve()
    verified = verify_cyclic(curve, verdict.k)
    if not verified:
        logger.error(f"ζ_{verdict.k} 不保持化简后的曲线")
    return AutomorphismReport(verdict.k, verified, verdict.factor_count)
