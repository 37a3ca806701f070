"""
配置验证器
对数值容差、采样、绘图与日志配置做范围裁剪
"""
from typing import Any, Dict, List, Union
import logging

logger = logging.getLogger(__name__)

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]


class ConfigValidator:
    """配置验证器"""

    @staticmethod
    def validate_range(value: Union[int, float], min_val: Union[int, float], max_val: Union[int, float]) -> bool:
        """验证数值是否在指定范围内"""
        try:
            return min_val <= float(value) <= max_val
        except (ValueError, TypeError):
            return False

    @staticmethod
    def validate_choice(value: Any, choices: List[Any]) -> bool:
        """验证值是否在选择列表中"""
        return value in choices

    @staticmethod
    def clamp(value: Any, min_val: Union[int, float], max_val: Union[int, float], default: Union[int, float]):
        """裁剪到 [min_val, max_val]，无法转换时返回默认值"""
        kind = type(default)
        try:
            number = kind(value)
        except (ValueError, TypeError):
            logger.warning(f"配置值 {value!r} 无法转换为 {kind.__name__}，使用默认值 {default}")
            return default
        if ConfigValidator.validate_range(number, min_val, max_val):
            return number
        clamped = max(min_val, min(number, max_val))
        if clamped != number:
            logger.warning(f"配置值 {number} 超出范围 [{min_val}, {max_val}]，已裁剪为 {clamped}")
        return clamped

    @staticmethod
    def validate_numeric_config(config: Dict[str, Any]) -> Dict[str, Any]:
        """验证数值容差"""
        return {"tolerance": ConfigValidator.clamp(config.get("tolerance", 1e-10), 1e-14, 1e-3, 1e-10)}

    @staticmethod
    def validate_oracle_config(config: Dict[str, Any]) -> Dict[str, Any]:
        """验证采样预言机配置"""
        oracle = config.get("oracle", {})
        return {
            "samples": ConfigValidator.clamp(oracle.get("samples", 12), 3, 500, 12),
            "seed": ConfigValidator.clamp(oracle.get("seed", 1), 0, 2 ** 31 - 1, 1),
            "workers": ConfigValidator.clamp(oracle.get("workers", 1), 1, 32, 1),
            "max_height": ConfigValidator.clamp(oracle.get("max_height", 50), 5, 1000, 50),
        }

    @staticmethod
    def validate_t_locus_config(config: Dict[str, Any]) -> Dict[str, Any]:
        t_locus = config.get("t_locus", {})
        return {"samples": ConfigValidator.clamp(t_locus.get("samples", 12), 3, 500, 12)}

    @staticmethod
    def validate_plot_config(config: Dict[str, Any]) -> Dict[str, Any]:
        """验证绘图配置"""
        plot = config.get("plot", {})
        validated = {
            "lines": ConfigValidator.clamp(plot.get("lines", 8), 2, 64, 8),
            "sweep_steps": ConfigValidator.clamp(plot.get("sweep_steps", 400), 10, 5000, 400),
            "width": ConfigValidator.clamp(plot.get("width", 800), 100, 4000, 800),
            "height": ConfigValidator.clamp(plot.get("height", 600), 100, 4000, 600),
            "margin": ConfigValidator.clamp(plot.get("margin", 0.1), 0.0, 1.0, 0.1),
        }
        y_range = plot.get("y_range", [-3.0, 3.0])
        if (
            isinstance(y_range, (list, tuple))
            and len(y_range) == 2
            and all(isinstance(v, (int, float)) for v in y_range)
            and y_range[0] < y_range[1]
        ):
            validated["y_range"] = [float(y_range[0]), float(y_range[1])]
        else:
            logger.warning(f"plot.y_range 无效: {y_range!r}，使用默认值")
            validated["y_range"] = [-3.0, 3.0]
        return validated

    @staticmethod
    def validate_logging_config(config: Dict[str, Any]) -> Dict[str, Any]:
        level = str(config.get("logging", {}).get("level", "WARNING")).upper()
        return {"level": level if ConfigValidator.validate_choice(level, LOG_LEVELS) else "WARNING"}
