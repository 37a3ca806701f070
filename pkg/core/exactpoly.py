"""
精确多项式运算
有理数系数的一元多项式、二元形式 (Y,Z) 与三元形式 (X,Y,Z)，所有符号判定最终都归结到这里
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import (
    DivisibilityError,
    InvalidInputError,
    UndefinedGcdError,
    ZeroPolynomialError,
)

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]
Monomial = Tuple[int, int, int]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(value) -> Fraction:
    """把整数、有理数或 "a/b" 字符串转换为 Fraction，拒绝浮点数"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise InvalidInputError(f"无法转换为有理数: {value!r}")


def format_fraction(value: Fraction) -> str:
    """有理数序列化为 "a/b"（整数时只写分子）"""
    value = as_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _format_terms(terms: Iterable[Tuple[Fraction, str]]) -> str:
    """把 (系数, 单项式文本) 序列拼成可被解析器读回的多项式文本"""
    pieces: List[str] = []
    for coeff, monomial in terms:
        if coeff == 0:
            continue
        negative = coeff < 0
        magnitude = -coeff if negative else coeff
        if not monomial:
            body = format_fraction(magnitude)
        elif magnitude == 1:
            body = monomial
        else:
            body = f"{format_fraction(magnitude)}*{monomial}"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces) if pieces else "0"


def _power_text(name: str, exponent: int) -> str:
    if exponent == 0:
        return ""
    if exponent == 1:
        return name
    return f"{name}^{exponent}"


def _monomial_text(names: Sequence[str], exponents: Sequence[int]) -> str:
    return "*".join(p for p in (_power_text(n, e) for n, e in zip(names, exponents)) if p)


# ----------------------------------------------------------------------
# 一元多项式
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class UnivariatePoly:
    """一元多项式，coeffs[i] 是 x^i 的系数；零多项式为空元组"""
    coeffs: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        values = [as_fraction(c) for c in self.coeffs]
        while values and values[-1] == 0:
            values.pop()
        object.__setattr__(self, "coeffs", tuple(values))

    @classmethod
    def constant(cls, value: Scalar) -> "UnivariatePoly":
        return cls((value,))

    @classmethod
    def monomial(cls, exponent: int, value: Scalar = 1) -> "UnivariatePoly":
        return cls((0,) * exponent + (value,))

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar]) -> "UnivariatePoly":
        result = cls((1,))
        for root in roots:
            result = result * cls((-as_fraction(root), 1))
        return result

    @property
    def degree(self) -> int:
        """次数，零多项式为 -1"""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, exponent: int) -> Fraction:
        if 0 <= exponent < len(self.coeffs):
            return self.coeffs[exponent]
        return ZERO

    # 算术

    def __add__(self, other) -> "UnivariatePoly":
        other = _as_univariate(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UnivariatePoly(tuple(self.coefficient(i) + other.coefficient(i) for i in range(n)))

    __radd__ = __add__

    def __neg__(self) -> "UnivariatePoly":
        return UnivariatePoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "UnivariatePoly":
        return self + (-_as_univariate(other))

    def __rsub__(self, other) -> "UnivariatePoly":
        return _as_univariate(other) - self

    def __mul__(self, other) -> "UnivariatePoly":
        if isinstance(other, (int, Fraction)):
            return UnivariatePoly(tuple(c * other for c in self.coeffs))
        if not isinstance(other, UnivariatePoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return UnivariatePoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UnivariatePoly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "UnivariatePoly":
        if exponent < 0:
            raise InvalidInputError("多项式不支持负指数")
        result = UnivariatePoly((1,))
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def divmod(self, other: "UnivariatePoly") -> Tuple["UnivariatePoly", "UnivariatePoly"]:
        """带余除法"""
        if other.is_zero():
            raise ZeroPolynomialError("除数为零多项式")
        remainder = list(self.coeffs)
        quotient = [ZERO] * max(0, len(remainder) - len(other.coeffs) + 1)
        lead = other.lead
        shift_max = len(remainder) - len(other.coeffs)
        for shift in range(shift_max, -1, -1):
            c = remainder[shift + other.degree] / lead
            quotient[shift] = c
            if c == 0:
                continue
            for j, b in enumerate(other.coeffs):
                remainder[shift + j] -= c * b
        return UnivariatePoly(tuple(quotient)), UnivariatePoly(tuple(remainder))

    def exact_div(self, other: "UnivariatePoly") -> "UnivariatePoly":
        quotient, remainder = self.divmod(other)
        if not remainder.is_zero():
            raise DivisibilityError(f"{other} 不整除 {self}")
        return quotient

    def __mod__(self, other: "UnivariatePoly") -> "UnivariatePoly":
        return self.divmod(other)[1]

    def derivative(self) -> "UnivariatePoly":
        return UnivariatePoly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def evaluate(self, value):
        """Horner 求值，value 可以是有理数、浮点数或复数"""
        result = 0
        for c in reversed(self.coeffs):
            result = result * value + c
        return result

    __call__ = evaluate

    def compose(self, inner: "UnivariatePoly") -> "UnivariatePoly":
        result = UnivariatePoly()
        for c in reversed(self.coeffs):
            result = result * inner + UnivariatePoly((c,))
        return result

    def monic(self) -> "UnivariatePoly":
        if self.is_zero():
            raise ZeroPolynomialError("零多项式无法首一化")
        return self * (ONE / self.lead)

    def gcd(self, other: "UnivariatePoly") -> "UnivariatePoly":
        """首一最大公因式"""
        a, b = self, other
        if a.is_zero() and b.is_zero():
            raise UndefinedGcdError("两个零多项式的最大公因式无定义")
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def squarefree_part(self) -> "UnivariatePoly":
        if self.degree <= 0:
            return self.monic()
        return self.exact_div(self.gcd(self.derivative())).monic()

    def to_integer(self) -> Tuple[List[int], int]:
        """返回 (整数系数, 公分母)，使得 self = 整数多项式 / 公分母"""
        den = reduce(_lcm, (c.denominator for c in self.coeffs), 1)
        return [int(c * den) for c in self.coeffs], den

    def homogenize(self, degree: int) -> "BinaryForm":
        """齐次化为 degree 次二元形式，y 对应 Y，1 对应 Z"""
        if degree < self.degree:
            raise InvalidInputError(f"齐次化次数 {degree} 小于多项式次数 {self.degree}")
        padded = list(self.coeffs) + [ZERO] * (degree + 1 - len(self.coeffs))
        return BinaryForm(degree, tuple(reversed(padded)))

    def to_text(self, var: str = "x") -> str:
        return _format_terms(
            (self.coeffs[e], _power_text(var, e)) for e in range(self.degree, -1, -1)
        )

    def __str__(self) -> str:
        return self.to_text()


def _as_univariate(value) -> UnivariatePoly:
    if isinstance(value, UnivariatePoly):
        return value
    return UnivariatePoly((value,))


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b) if a and b else max(a, b)


def yun_squarefree(poly: UnivariatePoly) -> List[Tuple[UnivariatePoly, int]]:
    """Yun 算法：返回首一、两两互素的无平方因子及其重数"""
    if poly.degree <= 0:
        return []
    u = poly.monic()
    du = u.derivative()
    a0 = u.gcd(du)
    b = u.exact_div(a0)
    c = du.exact_div(a0)
    d = c - b.derivative()
    factors: List[Tuple[UnivariatePoly, int]] = []
    multiplicity = 1
    while b.degree > 0:
        a = b.gcd(d)
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        if a.degree > 0:
            factors.append((a.monic(), multiplicity))
        multiplicity += 1
    return factors


# ----------------------------------------------------------------------
# 二元形式
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class BinaryForm:
    """(Y,Z) 的齐次多项式，coeffs[i] 是 Y^(degree-i) Z^i 的系数"""
    degree: int
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(as_fraction(c) for c in self.coeffs)
        if self.degree < 0 or len(values) != self.degree + 1:
            raise InvalidInputError(f"二元形式系数个数 {len(values)} 与次数 {self.degree} 不符")
        object.__setattr__(self, "coeffs", values)

    @classmethod
    def zero(cls, degree: int) -> "BinaryForm":
        return cls(degree, (0,) * (degree + 1))

    @classmethod
    def one(cls) -> "BinaryForm":
        return cls(0, (1,))

    @classmethod
    def y(cls) -> "BinaryForm":
        return cls(1, (1, 0))

    @classmethod
    def z(cls) -> "BinaryForm":
        return cls(1, (0, 1))

    @classmethod
    def z_power(cls, exponent: int) -> "BinaryForm":
        return cls(exponent, (0,) * exponent + (1,))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def z_order(self) -> int:
        """Z 的整除次数（零形式返回 degree+1）"""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return self.degree + 1

    @property
    def lead(self) -> Fraction:
        """按 Y 降幂的首个非零系数"""
        for c in self.coeffs:
            if c != 0:
                return c
        return ZERO

    def _check_same_degree(self, other: "BinaryForm"):
        if self.degree != other.degree:
            raise InvalidInputError(f"次数不同的形式不能相加: {self.degree} 与 {other.degree}")

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        self._check_same_degree(other)
        return BinaryForm(self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "BinaryForm":
        return BinaryForm(self.degree, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        return self + (-other)

    def __mul__(self, other) -> "BinaryForm":
        if isinstance(other, (int, Fraction)):
            return BinaryForm(self.degree, tuple(c * other for c in self.coeffs))
        if not isinstance(other, BinaryForm):
            return NotImplemented
        out = [ZERO] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return BinaryForm(self.degree + other.degree, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "BinaryForm":
        if exponent < 0:
            raise InvalidInputError("形式不支持负指数")
        result = BinaryForm.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def evaluate(self, y, z):
        total = 0
        for i, c in enumerate(self.coeffs):
            if c != 0:
                total += c * y ** (self.degree - i) * z ** i
        return total

    def dehomogenize(self) -> UnivariatePoly:
        """f(y, 1)"""
        return UnivariatePoly(tuple(reversed(self.coeffs)))

    def strip_z(self) -> Tuple[int, "BinaryForm"]:
        """f = Z^a * f1，返回 (a, f1)"""
        a = self.z_order
        if a > self.degree:
            raise ZeroPolynomialError("零形式没有 Z 分解")
        return a, BinaryForm(self.degree - a, self.coeffs[a:])

    def exact_div(self, other: "BinaryForm") -> "BinaryForm":
        if other.is_zero():
            raise ZeroPolynomialError("除数为零形式")
        if self.is_zero():
            return BinaryForm.zero(self.degree - other.degree)
        a, f1 = self.strip_z()
        b, g1 = other.strip_z()
        if b > a or other.degree > self.degree:
            raise DivisibilityError(f"{other} 不整除 {self}")
        quotient = f1.dehomogenize().exact_div(g1.dehomogenize())
        return quotient.homogenize(f1.degree - g1.degree) * BinaryForm.z_power(a - b)

    def divides(self, other: "BinaryForm") -> bool:
        try:
            other.exact_div(self)
            return True
        except DivisibilityError:
            return False

    def monic(self) -> "BinaryForm":
        if self.is_zero():
            raise ZeroPolynomialError("零形式无法首一化")
        return self * (ONE / self.lead)

    def primitive(self) -> "BinaryForm":
        """整系数、系数互素、首个非零系数为正"""
        if self.is_zero():
            raise ZeroPolynomialError("零形式没有本原表示")
        den = reduce(_lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(math.gcd, ints, 0)
        if self.lead < 0:
            g = -g
        return BinaryForm(self.degree, tuple(Fraction(v, g) for v in ints))

    def is_proportional(self, other: "BinaryForm") -> bool:
        """是否存在非零常数 c 使 self = c * other"""
        if self.degree != other.degree or self.is_zero() or other.is_zero():
            return False
        return self * other.lead == other * self.lead

    def root_multiplicities(self) -> Tuple[int, ...]:
        """P^1 上（复数域）根的重数模式，升序"""
        pattern: List[int] = []
        for factor, multiplicity in squarefree_factor(self)[1]:
            pattern.extend([multiplicity] * factor.degree)
        return tuple(sorted(pattern))

    def to_text(self, names: Tuple[str, str] = ("Y", "Z")) -> str:
        return _format_terms(
            (c, _monomial_text(names, (self.degree - i, i))) for i, c in enumerate(self.coeffs)
        )

    def __str__(self) -> str:
        return self.to_text()


def gcd_binary(a: BinaryForm, b: BinaryForm) -> BinaryForm:
    """二元形式的首一最大公因式"""
    if a.is_zero() and b.is_zero():
        raise UndefinedGcdError("两个零形式的最大公因式无定义")
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    za, a1 = a.strip_z()
    zb, b1 = b.strip_z()
    common = a1.dehomogenize().gcd(b1.dehomogenize())
    return (common.homogenize(common.degree) * BinaryForm.z_power(min(za, zb))).monic()


def squarefree_factor(f: BinaryForm) -> Tuple[Fraction, List[Tuple[BinaryForm, int]]]:
    """无平方分解 f = λ · Π g_i^{m_i}，g_i 首一、无平方、两两互素"""
    if f.is_zero():
        raise ZeroPolynomialError("零形式没有无平方分解")
    z_exp, rest = f.strip_z()
    factors = [
        (g.homogenize(g.degree), m) for g, m in yun_squarefree(rest.dehomogenize())
    ]
    if z_exp:
        factors.append((BinaryForm.z(), z_exp))
    return f.lead, factors


def perfect_power(f: BinaryForm, e: int) -> Optional[Tuple[Fraction, BinaryForm]]:
    """若 f = λ·H^e（H 有理、本原）则返回 (λ, H)，否则返回 None"""
    if e < 1:
        raise InvalidInputError(f"幂次必须为正: {e}")
    if f.is_zero():
        raise ZeroPolynomialError("零形式不是完全幂")
    _, factors = squarefree_factor(f)
    if any(m % e for _, m in factors):
        return None
    root = BinaryForm.one()
    for g, m in factors:
        root = root * g ** (m // e)
    h = root.primitive()
    lam = f.lead / h.lead ** e
    if h ** e * lam != f:
        return None
    return lam, h


# ----------------------------------------------------------------------
# 三元形式
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class TernaryForm:
    """(X,Y,Z) 的齐次多项式，terms 把指数三元组映射到非零系数"""
    degree: int
    terms: Dict[Monomial, Fraction]

    def __post_init__(self):
        cleaned: Dict[Monomial, Fraction] = {}
        for exps, value in self.terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != 3 or min(exps) < 0 or sum(exps) != self.degree:
                raise InvalidInputError(f"单项式 {exps} 与次数 {self.degree} 不符")
            value = as_fraction(value)
            if value != 0:
                cleaned[exps] = cleaned.get(exps, ZERO) + value
                if cleaned[exps] == 0:
                    del cleaned[exps]
        object.__setattr__(self, "terms", cleaned)

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.terms.items()))))

    @classmethod
    def zero(cls, degree: int) -> "TernaryForm":
        return cls(degree, {})

    @classmethod
    def from_x_coefficients(cls, degree: int, coefficients: Dict[int, BinaryForm]) -> "TernaryForm":
        """由 X^j 的系数形式（次数 degree-j）拼出三元形式"""
        terms: Dict[Monomial, Fraction] = {}
        for j, form in coefficients.items():
            if form.degree != degree - j:
                raise InvalidInputError(f"X^{j} 的系数次数应为 {degree - j}，实际为 {form.degree}")
            for i, c in enumerate(form.coeffs):
                if c != 0:
                    terms[(j, form.degree - i, i)] = c
        return cls(degree, terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def x_degree(self) -> int:
        return max((e[0] for e in self.terms), default=-1)

    def x_coefficient(self, j: int) -> BinaryForm:
        """X^j 的系数，次数为 degree - j 的二元形式"""
        width = self.degree - j
        coeffs = [ZERO] * (width + 1)
        for (a, b, c), value in self.terms.items():
            if a == j:
                coeffs[c] = value
        return BinaryForm(width, tuple(coeffs))

    def x_exponents(self) -> List[int]:
        return sorted({e[0] for e in self.terms})

    def __add__(self, other: "TernaryForm") -> "TernaryForm":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.degree != other.degree:
            raise InvalidInputError(f"次数不同的形式不能相加: {self.degree} 与 {other.degree}")
        terms = dict(self.terms)
        for exps, value in other.terms.items():
            terms[exps] = terms.get(exps, ZERO) + value
        return TernaryForm(self.degree, terms)

    def __neg__(self) -> "TernaryForm":
        return TernaryForm(self.degree, {e: -v for e, v in self.terms.items()})

    def __sub__(self, other: "TernaryForm") -> "TernaryForm":
        return self + (-other)

    def __mul__(self, other) -> "TernaryForm":
        if isinstance(other, (int, Fraction)):
            return TernaryForm(self.degree, {e: v * other for e, v in self.terms.items()})
        if not isinstance(other, TernaryForm):
            return NotImplemented
        return TernaryForm(self.degree + other.degree, _multiply_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "TernaryForm":
        result = TernaryForm(0, {(0, 0, 0): 1})
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def evaluate(self, x, y, z):
        total = 0
        for (a, b, c), value in self.terms.items():
            total += value * x ** a * y ** b * z ** c
        return total

    def partial(self, variable: int) -> "TernaryForm":
        """对第 variable 个变量（0=X, 1=Y, 2=Z）求偏导"""
        terms: Dict[Monomial, Fraction] = {}
        for exps, value in self.terms.items():
            if exps[variable] == 0:
                continue
            lowered = list(exps)
            lowered[variable] -= 1
            terms[tuple(lowered)] = value * exps[variable]
        return TernaryForm(max(self.degree - 1, 0), terms)

    def gradient(self) -> Tuple["TernaryForm", "TernaryForm", "TernaryForm"]:
        return self.partial(0), self.partial(1), self.partial(2)

    def compose_linear(self, matrix: Sequence[Sequence[Scalar]]) -> "TernaryForm":
        """返回 v ↦ G(M v)，M 为 3×3 有理矩阵"""
        rows = [[as_fraction(v) for v in row] for row in matrix]
        return TernaryForm(self.degree, compose_terms(self.terms, rows))

    def restrict(self, y, z) -> list:
        """G(x, y, z) 关于 x 的系数列表（下标即 x 的幂）"""
        coeffs = [0] * (self.x_degree + 1)
        for (a, b, c), value in self.terms.items():
            coeffs[a] += value * y ** b * z ** c
        return coeffs

    def restrict_to_line(self, y0: Optional[Scalar]) -> UnivariatePoly:
        """沿直线 Y = y0 Z 限制：G(x, y0, 1)；y0 为 None 表示 Z = 0 即 G(x, 1, 0)"""
        if y0 is None:
            return UnivariatePoly(tuple(self.restrict(ONE, ZERO)))
        return UnivariatePoly(tuple(self.restrict(as_fraction(y0), ONE)))

    def x_content(self) -> BinaryForm:
        """作为 X 的多项式在 K[Y,Z] 上的容度（首一）"""
        content: Optional[BinaryForm] = None
        for j in self.x_exponents():
            coeff = self.x_coefficient(j)
            content = coeff.monic() if content is None else gcd_binary(content, coeff)
        if content is None:
            raise ZeroPolynomialError("零形式没有容度")
        return content

    def divide_by_binary(self, form: BinaryForm) -> "TernaryForm":
        coefficients = {
            j: self.x_coefficient(j).exact_div(form) for j in self.x_exponents()
        }
        return TernaryForm.from_x_coefficients(self.degree - form.degree, coefficients)

    def divide_by_x(self, power: int = 1) -> "TernaryForm":
        terms: Dict[Monomial, Fraction] = {}
        for (a, b, c), value in self.terms.items():
            if a < power:
                raise DivisibilityError(f"X^{power} 不整除该形式")
            terms[(a - power, b, c)] = value
        return TernaryForm(self.degree - power, terms)

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda item: item[0], reverse=True)

    def lead(self) -> Fraction:
        items = self.sorted_terms()
        return items[0][1] if items else ZERO

    def primitive(self) -> "TernaryForm":
        """整系数、系数互素、按字典序首项系数为正"""
        if self.is_zero():
            raise ZeroPolynomialError("零形式没有本原表示")
        den = reduce(_lcm, (v.denominator for v in self.terms.values()), 1)
        g = reduce(math.gcd, (int(v * den) for v in self.terms.values()), 0)
        if self.lead() < 0:
            g = -g
        return self * Fraction(den, g)

    def is_proportional(self, other: "TernaryForm") -> bool:
        if self.degree != other.degree or self.is_zero() or other.is_zero():
            return False
        return self * other.lead() == other * self.lead()

    def to_text(self, names: Tuple[str, str, str] = ("X", "Y", "Z")) -> str:
        return _format_terms(
            (value, _monomial_text(names, exps)) for exps, value in self.sorted_terms()
        )

    def __str__(self) -> str:
        return self.to_text()


def _multiply_terms(left: Dict[Monomial, object], right: Dict[Monomial, object]) -> Dict[Monomial, object]:
    out: Dict[Monomial, object] = {}
    for (a1, b1, c1), v1 in left.items():
        for (a2, b2, c2), v2 in right.items():
            key = (a1 + a2, b1 + b2, c1 + c2)
            out[key] = out.get(key, 0) + v1 * v2
    return out


def compose_terms(terms: Dict[Monomial, object], matrix: Sequence[Sequence[object]]) -> Dict[Monomial, object]:
    """对稀疏单项式表做线性代换 v ↦ M v，系数可以是有理数或复数"""
    linear = []
    for row in matrix:
        linear.append({
            (1, 0, 0): row[0], (0, 1, 0): row[1], (0, 0, 1): row[2],
        })
    powers: List[List[Dict[Monomial, object]]] = [[{(0, 0, 0): 1}] for _ in range(3)]

    def power(index: int, exponent: int) -> Dict[Monomial, object]:
        cache = powers[index]
        while len(cache) <= exponent:
            cache.append(_multiply_terms(cache[-1], linear[index]))
        return cache[exponent]

    out: Dict[Monomial, object] = {}
    for (a, b, c), value in terms.items():
        product = _multiply_terms(_multiply_terms(power(0, a), power(1, b)), power(2, c))
        for key, v in product.items():
            out[key] = out.get(key, 0) + value * v
    return out


# ----------------------------------------------------------------------
# 结式与判别式
# ----------------------------------------------------------------------

def _det_bareiss(matrix: List[List[Scalar]]) -> Scalar:
    """Bareiss 无分数消元求行列式，整数矩阵全程整除，带行交换"""
    integral = all(isinstance(v, int) for row in matrix for v in row)
    m = [list(row) if integral else [as_fraction(v) for v in row] for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                value = m[i][j] * pivot - m[i][k] * m[k][j]
                m[i][j] = value // prev if integral else value / prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def _subresultant_matrix(f: Sequence[Scalar], g: Sequence[Scalar], index: int) -> List[List[Scalar]]:
    """第 index 个子结式的主系数矩阵；f、g 按降幂给出，f 的行在前"""
    n, k = len(f) - 1, len(g) - 1
    width = n + k - 2 * index
    rows: List[List[Scalar]] = []
    for r in range(k - index):
        rows.append(([0] * r + list(f) + [0] * width)[:width])
    for r in range(n - index):
        rows.append(([0] * r + list(g) + [0] * width)[:width])
    return rows


def sylvester_matrix(f: UnivariatePoly, g: UnivariatePoly) -> List[List[Fraction]]:
    """标准 Sylvester 矩阵，f 的行在前"""
    return _subresultant_matrix(list(reversed(f.coeffs)), list(reversed(g.coeffs)), 0)


def resultant(f: UnivariatePoly, g: UnivariatePoly) -> Fraction:
    """res(f, g) = det S(f, g)，f 的行在前"""
    if f.is_zero() or g.is_zero():
        return ZERO
    return Fraction(_det_bareiss(sylvester_matrix(f, g)))


def discriminant(f: UnivariatePoly) -> Fraction:
    """disc(f) = (-1)^{n(n-1)/2} / a_n · res(f, f')"""
    n = f.degree
    if n < 1:
        raise InvalidInputError("常数多项式没有判别式")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.lead


def _interpolate_consecutive(values: List[int]) -> UnivariatePoly:
    """在 y = 0, 1, …, n 处插值，牛顿前向差分"""
    diffs = list(values)
    newton: List[int] = []
    for _ in range(len(values)):
        newton.append(diffs[0])
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    result = UnivariatePoly()
    basis = UnivariatePoly((1,))
    factorial = 1
    for k, delta in enumerate(newton):
        if k:
            factorial *= k
        if delta:
            result = result + basis * Fraction(delta, factorial)
        basis = basis * UnivariatePoly((-k, 1))
    return result


def _integer_x_coefficients(form: TernaryForm) -> Tuple[List[List[int]], int]:
    """X^j 系数在 Z=1 处的整系数多项式（下标 j），以及公分母"""
    den = reduce(_lcm, (v.denominator for v in form.terms.values()), 1)
    coeffs = [[0] * (form.degree + 1) for _ in range(form.x_degree + 1)]
    for (a, b, c), value in form.terms.items():
        coeffs[a][b] = int(value * den)
    return coeffs, den


def _eval_int(coeffs: List[int], t: int) -> int:
    total = 0
    for c in reversed(coeffs):
        total = total * t + c
    return total


def subresultant_in_x(form: TernaryForm, index: int) -> BinaryForm:
    """G 与 ∂G/∂X 关于 X 的第 index 个主子结式系数，作为 (Y,Z) 的齐次形式

    形式次数按 G 的 X 次数 d 与 ∂G/∂X 的 d-1 计，结果次数为
    (2d-1-2i)m + (d-1-i)(d-i)，m = deg G - d。
    """
    d = form.x_degree
    if d < 1:
        raise InvalidInputError("X 次数小于 1，无法计算关于 X 的判别式")
    if not 0 <= index <= d - 1:
        raise InvalidInputError(f"子结式下标超出范围: {index}")
    m = form.degree - d
    weight = (2 * d - 1 - 2 * index) * m + (d - 1 - index) * (d - index)
    coeffs, den = _integer_x_coefficients(form)
    values: List[int] = []
    for t in range(weight + 1):
        a = [_eval_int(coeffs[j], t) for j in range(d, -1, -1)]
        da = [(d - j) * a[j] for j in range(d)]
        values.append(_det_bareiss(_subresultant_matrix(a, da, index)))
    poly = _interpolate_consecutive(values) * Fraction(1, den ** (2 * d - 1 - 2 * index))
    return poly.homogenize(weight)


def discriminant_in_x(form: TernaryForm) -> BinaryForm:
    """形式结式 Res_X(G, ∂G/∂X)，在 (y0, z0) 处为零当且仅当 G(X, y0, z0) 有重根或掉次"""
    return subresultant_in_x(form, 0)


discriminant_in_X = discriminant_in_x


def is_squarefree_in_x(form: TernaryForm) -> bool:
    """discriminant_in_x(G) 是否非零；在 weight+1 个整点上逐一检查限制多项式"""
    d = form.x_degree
    if d < 1:
        return False
    weight = (2 * d - 1) * (form.degree - d) + d * (d - 1)
    for t in range(weight + 1):
        restricted = form.restrict_to_line(t)
        if restricted.degree == d and restricted.gcd(restricted.derivative()).degree == 0:
            return True
    return False
