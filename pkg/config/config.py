"""
配置管理模块
读取 config.json 并与默认值合并、验证；环境变量 MODULI_TOL 覆盖默认容差
"""
import copy
import json
import os
import logging
from typing import Any, Dict, Optional

from utils.common import ConfigUtils
from .validators import ConfigValidator

logger = logging.getLogger(__name__)

TOLERANCE_ENV = "MODULI_TOL"


class Config:
    """配置管理类（只读）"""

    def __init__(self, config_file: Optional[str] = "config.json", environ: Optional[Dict[str, str]] = None):
        self.config_file = config_file
        self.environ = os.environ if environ is None else environ
        self.default_config = {
            "tolerance": 1e-10,
            # 采样预言机
            "oracle": {
                "samples": 12,
                "seed": 1,
                "workers": 1,  # >1 时用线程池并行求根
                "max_height": 50,  # 采样直线参数 a/b 的高度上限
            },
            "t_locus": {
                "samples": 12
            },
            # 绘图
            "plot": {
                "lines": 8,
                "sweep_steps": 400,
                "width": 800,
                "height": 600,
                "y_range": [-3.0, 3.0],
                "margin": 0.1
            },
            "logging": {
                "level": "WARNING"
            }
        }
        self.config = self.load_config()

    def load_config(self) -> Dict[str, Any]:
        """加载并验证配置文件"""
        merged = copy.deepcopy(self.default_config)
        if self.config_file and os.path.exists(self.config_file):
            try:
                with open(self.config_file, 'r', encoding='utf-8') as f:
                    merged = ConfigUtils.merge_configs(merged, json.load(f))
            except (json.JSONDecodeError, OSError) as e:
                logger.warning(f"配置文件加载失败: {e}，使用默认配置")
        else:
            logger.debug("配置文件不存在，使用默认配置")

        env_tol = self.environ.get(TOLERANCE_ENV)
        if env_tol:
            try:
                merged["tolerance"] = float(env_tol)
                logger.debug(f"{TOLERANCE_ENV} 覆盖容差: {env_tol}")
            except ValueError:
                logger.warning(f"{TOLERANCE_ENV}={env_tol!r} 不是数字，已忽略")
        return self._validate_config(merged)

    def _validate_config(self, config: Dict[str, Any]) -> Dict[str, Any]:
        """验证配置并返回验证后的配置"""
        validated = {}
        validated.update(ConfigValidator.validate_numeric_config(config))
        validated['oracle'] = ConfigValidator.validate_oracle_config(config)
        validated['t_locus'] = ConfigValidator.validate_t_locus_config(config)
        validated['plot'] = ConfigValidator.validate_plot_config(config)
        validated['logging'] = ConfigValidator.validate_logging_config(config)
        return validated

    def get(self, key: str, default=None):
        """获取配置值"""
        return self.config.get(key, default)

    def get_nested(self, keys: str, default=None):
        """获取嵌套配置值，使用点分隔的键"""
        try:
            value = self.config
            for key in keys.split('.'):
                value = value[key]
            return value
        except (KeyError, TypeError):
            return default
