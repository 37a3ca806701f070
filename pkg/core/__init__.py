"""
常模数判定核心库
平面曲线与点对 (C, p) 的常模数判定、正规形、低次分类与超椭圆族等平凡性
"""

__version__ = "1.0.0"
TOOL_NAME = "pencil-moduli"
