"""
多项式文本解析
变量 X,Y,Z（或 x,y,z），整数与 a/b 有理系数，运算符 + - * ^，禁止隐式乘法
"""
import logging
import re
from fractions import Fraction
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

from .errors import ParseError
from .exactpoly import TernaryForm, UnivariatePoly

logger = logging.getLogger(__name__)

Exponents = Tuple[int, ...]
Polynomial = Dict[Exponents, Fraction]

CURVE_VARIABLES = {"X": 0, "Y": 1, "Z": 2, "x": 0, "y": 1, "z": 2}
FAMILY_VARIABLES = {"x": 0, "y": 1, "t": 1, "X": 0, "Y": 1, "T": 1}

MAX_EXPONENT = 128

_TOKEN_SPEC = [
    ("NUMBER", r"\d+"),
    ("VAR", r"[A-Za-z]"),
    ("OP", r"[+\-*^/]"),
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
    ("SKIP", r"\s+"),
    ("MISMATCH", r"."),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))


class Token(NamedTuple):
    type: str
    value: str
    where: Tuple[int, int]


def tokenize(source: str) -> Iterator[Token]:
    """切分词法单元，非法字符直接报错"""
    for match in _TOKEN_RE.finditer(source):
        kind = match.lastgroup
        where = (match.start(), match.end())
        if kind == "SKIP":
            continue
        if kind == "MISMATCH":
            raise ParseError(f"非法字符 '{match.group()}'", source, where)
        yield Token(kind, match.group(), where)
    yield Token("END", "", (len(source), len(source) + 1))


def _add(a: Polynomial, b: Polynomial) -> Polynomial:
    out = dict(a)
    for key, value in b.items():
        out[key] = out.get(key, Fraction(0)) + value
        if out[key] == 0:
            del out[key]
    return out


def _scale(a: Polynomial, c: Fraction) -> Polynomial:
    return {k: v * c for k, v in a.items()} if c != 0 else {}


def _mul(a: Polynomial, b: Polynomial) -> Polynomial:
    out: Polynomial = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            key = tuple(x + y for x, y in zip(ka, kb))
            out[key] = out.get(key, Fraction(0)) + va * vb
    return {k: v for k, v in out.items() if v != 0}


def _pow(a: Polynomial, exponent: int, arity: int) -> Polynomial:
    result: Polynomial = {(0,) * arity: Fraction(1)}
    for _ in range(exponent):
        result = _mul(result, a)
    return result


class PolynomialParser:
    """Pratt 解析器：中缀 + - * ^，前缀 + -"""

    BINDING = {"+": 10, "-": 10, "*": 20, "^": 30}
    PREFIX_BINDING = 25
    # 紧跟在操作数后面的这些记号意味着隐式乘法
    JUXTAPOSED = ("NUMBER", "VAR", "LPAREN")

    def __init__(self, variables: Dict[str, int]):
        self.variables = variables
        self.arity = max(variables.values()) + 1
        self.source = ""
        self.tokens: Iterator[Token] = iter([])
        self.token: Token = Token("END", "", (0, 0))

    def parse(self, source: str) -> Polynomial:
        self.source = source
        self.tokens = tokenize(source)
        self.advance()
        if self.token.type == "END":
            raise ParseError("输入为空", source, self.token.where)
        result = self.expression(0)
        if self.token.type != "END":
            self._unexpected(self.token)
        return result

    def advance(self) -> Token:
        previous = self.token
        end = Token("END", "", (len(self.source), len(self.source) + 1))
        self.token = next(self.tokens, end)
        return previous

    def _lbp(self, token: Token) -> int:
        if token.type == "OP":
            return self.BINDING.get(token.value, 0)
        if token.type in self.JUXTAPOSED:
            return self.BINDING["*"]
        return 0

    def _unexpected(self, token: Token):
        if token.type in self.JUXTAPOSED:
            raise ParseError("不允许隐式乘法，请使用显式的 *", self.source, token.where)
        if token.type == "END":
            raise ParseError("表达式意外结束", self.source, token.where)
        raise ParseError(f"意外的符号 '{token.value}'", self.source, token.where)

    def expression(self, rbp: int) -> Polynomial:
        left = self.nud(self.advance())
        while rbp < self._lbp(self.token):
            left = self.led(self.advance(), left)
        return left

    def nud(self, token: Token) -> Polynomial:
        if token.type == "NUMBER":
            return {(0,) * self.arity: self._number(token)}
        if token.type == "VAR":
            if token.value not in self.variables:
                raise ParseError(f"未知变量 '{token.value}'", self.source, token.where)
            exps = [0] * self.arity
            exps[self.variables[token.value]] = 1
            return {tuple(exps): Fraction(1)}
        if token.type == "LPAREN":
            inner = self.expression(0)
            if self.token.type != "RPAREN":
                raise ParseError("缺少右括号 ')'", self.source, self.token.where)
            self.advance()
            return inner
        if token.type == "OP" and token.value in "+-":
            operand = self.expression(self.PREFIX_BINDING)
            return operand if token.value == "+" else _scale(operand, Fraction(-1))
        self._unexpected(token)

    def led(self, token: Token, left: Polynomial) -> Polynomial:
        if token.type in self.JUXTAPOSED:
            self._unexpected(token)
        op = token.value
        if op == "^":
            exponent_token = self.advance()
            if exponent_token.type != "NUMBER":
                raise ParseError("指数必须是非负整数", self.source, exponent_token.where)
            exponent = int(exponent_token.value)
            if exponent > MAX_EXPONENT:
                raise ParseError(f"指数过大（上限 {MAX_EXPONENT}）", self.source, exponent_token.where)
            if self.token.type == "OP" and self.token.value == "^":
                raise ParseError("不支持连续乘方，请加括号", self.source, self.token.where)
            return _pow(left, exponent, self.arity)
        right = self.expression(self.BINDING[op])
        if op == "+":
            return _add(left, right)
        if op == "-":
            return _add(left, _scale(right, Fraction(-1)))
        return _mul(left, right)

    def _number(self, token: Token) -> Fraction:
        value = Fraction(int(token.value))
        if self.token.type == "OP" and self.token.value == "/":
            slash = self.advance()
            denominator = self.advance()
            if denominator.type != "NUMBER":
                raise ParseError("'/' 只能用于有理数字面量 a/b", self.source, slash.where)
            if int(denominator.value) == 0:
                raise ParseError("分母为零", self.source, denominator.where)
            value /= int(denominator.value)
        return value


def parse_polynomial(source: str, variables: Optional[Dict[str, int]] = None) -> Polynomial:
    """解析为稀疏多项式 {指数元组: 系数}"""
    parser = PolynomialParser(variables or CURVE_VARIABLES)
    return parser.parse(source)


def parse_form(source: str) -> TernaryForm:
    """解析平面曲线的齐次方程

    Args:
        source: 形如 "X^3+Y^3+Z^3" 的文本

    Returns:
        TernaryForm
    """
    poly = parse_polynomial(source, CURVE_VARIABLES)
    if not poly:
        raise ParseError("零多项式不能定义曲线", source, (0, len(source)))
    degrees = sorted({sum(exps) for exps in poly}, reverse=True)
    if len(degrees) > 1:
        raise ParseError(
            f"输入不是齐次的: 同时出现 {degrees[0]} 次与 {degrees[1]} 次单项式",
            source, (0, len(source)),
        )
    return TernaryForm(degrees[0], poly)


def parse_point(source: str) -> Tuple[Fraction, Fraction, Fraction]:
    """解析射影点 "a,b,c"，分量为整数或 a/b"""
    parts = source.split(",")
    if len(parts) != 3:
        raise ParseError("射影点需要恰好三个分量 a,b,c", source, (0, len(source)))
    coords: List[Fraction] = []
    offset = 0
    for part in parts:
        text = part.strip()
        start = offset + (len(part) - len(part.lstrip()))
        try:
            coords.append(Fraction(text))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"无法解析坐标 '{text}'", source, (start, start + max(1, len(text))))
        offset += len(part) + 1
    if all(c == 0 for c in coords):
        raise ParseError("[0:0:0] 不是射影点", source, (0, len(source)))
    return coords[0], coords[1], coords[2]


def parse_family(source: str) -> Dict[int, UnivariatePoly]:
    """解析 "z^2 = <x 与 y 的多项式>"，返回 x^k 的系数多项式 c_k(y)

    参数变量可写作 y 或 t。
    """
    if source.count("=") != 1:
        raise ParseError("族方程必须形如 z^2 = ...", source, (0, len(source)))
    left, right = source.split("=")
    if re.sub(r"\s+", "", left) not in ("z^2", "Z^2"):
        raise ParseError("等号左边必须恰好是 z^2", source, (0, len(left)))
    offset = len(left) + 1
    try:
        poly = parse_polynomial(right, FAMILY_VARIABLES)
    except ParseError as e:
        position = None
        if e.position is not None:
            position = (e.position[0] + offset, e.position[1] + offset)
        raise ParseError(e.message, source, position) from e
    if not poly:
        raise ParseError("等号右边为零", source, (offset, len(source)))
    by_power: Dict[int, Dict[int, Fraction]] = {}
    for (k, j), value in poly.items():
        by_power.setdefault(k, {})[j] = value
    coefficients: Dict[int, UnivariatePoly] = {}
    for k, terms in by_power.items():
        top = max(terms)
        coefficients[k] = UnivariatePoly(tuple(terms.get(j, 0) for j in range(top + 1)))
    logger.debug(f"族方程解析完成: x 次数 {max(coefficients)}")
    return coefficients
