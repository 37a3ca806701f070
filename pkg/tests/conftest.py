"""
测试公共设置
把项目根目录加入导入路径，并提供常用曲线与直线束
"""
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.parser import parse_form  # noqa: E402
from core.pencil import setup  # noqa: E402


@pytest.fixture
def fermat_pencil():
    return setup(parse_form("X^3+Y^3+Z^3"), (1, 0, 0))


@pytest.fixture
def cusp_pencil():
    return setup(parse_form("X^3+Y^2*Z"), (1, 0, 0))


@pytest.fixture
def missing_config(tmp_path):
    """不存在的配置文件路径，让 Config 回落到默认值"""
    return str(tmp_path / "absent.json")
