#!/usr/bin/env python3
"""
配置管理模块
集中管理运行级配置项（并行度、默认网格、阈值、日志），便于维护和扩展

数值容差不在此处配置，见 src/core/tolerances.py
"""

import logging
import os
from pathlib import Path
from typing import Any, List, Optional

import yaml
from dotenv import load_dotenv

from .core.exceptions import ConfigError

logger = logging.getLogger(__name__)

# 加载环境变量
load_dotenv()


class Config:
    """配置类，管理所有配置项"""

    # 整数配置项及其默认值
    INT_DEFAULTS = {
        "MAX_WORKERS": "0",
        "DEFAULT_GRID_POINTS": "2001",
        "QUAD_NODES": "128",
        "CHERNOFF_GRID_POINTS": "101",
        "EXPLICIT_N_CAP": "6",
        "PURIFICATION_TRIALS": "1000",
        "WIENER_SAMPLES": "20001",
        "PURITY_SCAN_POINTS": "400",
    }

    # 浮点配置项及其默认值
    FLOAT_DEFAULTS = {
        "DECAY_THRESHOLD": "0.1",
    }

    def _clean_string(self, value: Any) -> Any:
        """清理字符串中的特殊字符"""
        if not isinstance(value, str):
            return value
        # 移除不间断空格和其他不可见字符
        return value.replace('\xa0', ' ').strip()

    def _safe_int(self, value: Any, default: str) -> int:
        """安全的整数转换"""
        if value is None:
            return int(default)
        try:
            return int(self._clean_string(value))
        except (ValueError, TypeError):
            return int(default)

    def _safe_float(self, value: Any, default: str) -> float:
        """安全的浮点数转换"""
        if value is None:
            return float(default)
        try:
            return float(self._clean_string(value))
        except (ValueError, TypeError):
            return float(default)

    def __init__(self, config_file: Optional[Path] = None):
        """
        初始化配置，从文件和环境变量读取

        Args:
            config_file: 可选的 YAML 配置路径，默认使用仓库根目录的 config.yml
        """

        # 1. 设置路径
        self.BASE_DIR = Path(__file__).parent.parent
        self.CONFIG_FILE = Path(config_file) if config_file else self.BASE_DIR / "config.yml"

        # 2. 从YAML文件加载默认配置
        self._config = self._load_from_yaml()

        # 3. 从环境变量加载并覆盖配置
        self._load_from_env()

        # 4. 设置派生配置和路径
        self._set_derived_paths()

    def _load_from_yaml(self) -> dict:
        """从YAML文件加载配置"""
        if not self.CONFIG_FILE.exists():
            return {}
        with open(self.CONFIG_FILE, 'r', encoding='utf-8') as f:
            return yaml.safe_load(f) or {}

    def _load_from_env(self):
        """从环境变量加载配置，覆盖YAML中的值"""
        known_keys = set(self._config) | set(self.INT_DEFAULTS) | set(self.FLOAT_DEFAULTS)
        known_keys |= {"OUTPUT_DIR", "LOG_LEVEL", "LOG_DIR"}

        for key in sorted(known_keys):
            env_value = os.getenv(key)
            if env_value is not None:
                self._config[key] = self._clean_string(env_value)

    def get(self, key: str, default: Any = None) -> Any:
        """获取配置项，支持默认值"""
        return self._config.get(key, default)

    def set(self, key: str, value: Any) -> None:
        """覆盖配置项（命令行参数优先级最高）"""
        self._config[key.upper()] = value

    def _set_derived_paths(self):
        """设置所有派生路径"""
        self.TEMPLATES_DIR = self.BASE_DIR / "src" / "output" / "templates"
        self.SCHEMAS_DIR = self.BASE_DIR / "src" / "output" / "schemas"

    def __getattr__(self, name: str) -> Any:
        """使配置项可以作为属性访问"""
        if name.startswith("_"):
            raise AttributeError(name)
        # 将属性名转为大写以匹配环境变量和YAML键
        key = name.upper()

        if key in self.INT_DEFAULTS:
            return self._safe_int(self.get(key), self.INT_DEFAULTS[key])

        if key in self.FLOAT_DEFAULTS:
            return self._safe_float(self.get(key), self.FLOAT_DEFAULTS[key])

        if key == "OUTPUT_DIR":
            value = self.get(key) or "storage/runs"
            path = Path(value)
            return path if path.is_absolute() else self.BASE_DIR / path

        if key == "LOG_LEVEL":
            return str(self.get(key) or "INFO").upper()

        if key == "LOG_DIR":
            value = self._clean_string(self.get(key) or "")
            if not value:
                return None
            path = Path(value)
            return path if path.is_absolute() else self.BASE_DIR / path

        # 对于其他所有字符串值
        return self.get(key)

    @property
    def workers(self) -> Optional[int]:
        """线程池大小：0 表示自动（交给 ThreadPoolExecutor 决定）"""
        value = self.max_workers
        return value if value > 0 else None

    def problems(self) -> List[str]:
        """返回配置问题列表，空列表表示配置有效"""
        issues = []
        if self.max_workers < 0:
            issues.append(f"MAX_WORKERS 不能为负数: {self.max_workers}")
        for key in ("DEFAULT_GRID_POINTS", "QUAD_NODES", "CHERNOFF_GRID_POINTS",
                    "PURIFICATION_TRIALS", "WIENER_SAMPLES", "PURITY_SCAN_POINTS"):
            if getattr(self, key) < 2:
                issues.append(f"{key} 至少为 2: {getattr(self, key)}")
        if self.explicit_n_cap < 1:
            issues.append(f"EXPLICIT_N_CAP 至少为 1: {self.explicit_n_cap}")
        if not 0.0 < self.decay_threshold < 1.0:
            issues.append(f"DECAY_THRESHOLD 必须位于 (0, 1): {self.decay_threshold}")
        return issues

    def validate(self) -> None:
        """验证配置是否有效，无效时逐条记录并抛出 ConfigError"""
        issues = self.problems()
        for issue in issues:
            logger.error(f"❌ {issue}")
        if issues:
            raise ConfigError("; ".join(issues))
