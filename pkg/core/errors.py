"""
异常定义
库内所有可预期的失败都以 ModuliError 的子类抛出，CLI 据此映射退出码
"""
from typing import Optional, Tuple


class ModuliError(Exception):
    """库内异常基类"""


class ParseError(ModuliError):
    """多项式文本解析失败，携带出错位置"""

    def __init__(self, message: str, source: str = "", position: Optional[Tuple[int, int]] = None):
        self.message = message
        self.source = source
        self.position = position
        super().__init__(message)

    def annotated(self) -> str:
        """返回带插入符标记的多行错误信息"""
        lines = [f"{self.message}:", f"  {self.source}"]
        if self.position is not None:
            start, end = self.position
            lines.append("  " + " " * start + "^" * max(1, end - start))
        return "\n".join(lines)


class DivisibilityError(ModuliError):
    """精确除法的除数不整除被除数"""


class UndefinedGcdError(ModuliError):
    """两个零形式的最大公因式无定义"""


class ZeroPolynomialError(ModuliError):
    """要求非零多项式的位置收到了零多项式"""


class IllConditionedError(ModuliError):
    """数值求根未收敛，partial 保存已得到的近似根"""

    def __init__(self, message: str, partial=None):
        self.partial = partial
        super().__init__(message)


class UnsupportedDegreeError(ModuliError):
    """X 次数不足 3 或分类不支持该次数"""


class InvalidInputError(ModuliError):
    """输入不满足操作前提"""


class LineContainedError(ModuliError):
    """束中的直线整条落在曲线上"""


class NonReducedError(ModuliError):
    """曲线不是既约的（存在重复因子）"""


class DegenerateLineError(ModuliError):
    """直线与 C−{p} 的交点不是 d 个互异点"""


class SingularPointError(ModuliError):
    """直线经过曲线的奇点"""


class InsufficientSamplesError(ModuliError):
    """可用的采样直线不足"""


class SizeMismatchError(ModuliError):
    """两个点多重集大小不同"""


class NonRepresentableError(ModuliError):
    """正规形在有理数上不可表示（Z 指数非整数或 H 非有理）"""


class DegenerateFamilyError(ModuliError):
    """族的所有纤维都奇异"""


class InternalInconsistencyError(ModuliError):
    """符号判定与数值检验互相矛盾"""
