#!/usr/bin/env python3
"""
日志管理模块
提供统一的日志记录功能
"""

import logging
import os
import sys
from datetime import datetime
from pathlib import Path

ROOT_LOGGER_NAME = "src"


def _file_handler_path(log_dir: Path) -> Path:
    return log_dir / f"qsd_lab_{datetime.now().strftime('%Y%m%d')}.log"


def setup_logger(
    name: str = ROOT_LOGGER_NAME,
    level: str | None = None,
    log_dir: str | Path | None = None,
) -> logging.Logger:
    """
    设置日志记录器

    标准输出只留给命令行的一行摘要，控制台日志一律写到标准错误。
    重复调用时只更新级别，并在给出新的日志目录时补上文件处理器。

    Args:
        name: 日志记录器名称；各模块用 logging.getLogger(__name__)，会冒泡到这里
        level: 日志级别，缺省时读取环境变量 LOG_LEVEL
        log_dir: 日志文件目录，缺省时读取环境变量 LOG_DIR；为空则不写文件

    Returns:
        配置好的日志记录器
    """
    logger = logging.getLogger(name)

    log_level_str = (level or os.environ.get("LOG_LEVEL", "INFO")).upper()

    # 确保转换后的日志级别是有效的logging级别，否则回退到INFO
    log_level = getattr(logging, log_level_str, None)
    if not isinstance(log_level, int):
        print(f"Warning: Invalid LOG_LEVEL '{log_level_str}'. Defaulting to INFO.", file=sys.stderr)
        log_level = logging.INFO

    logger.setLevel(log_level)
    for handler in logger.handlers:
        handler.setLevel(log_level)

    # 创建格式化器
    formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    # 控制台处理器（避免重复添加）
    if not any(type(h) is logging.StreamHandler for h in logger.handlers):
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(log_level)
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

    # 文件处理器（可选，设置 LOG_DIR 时启用）
    if log_dir is None:
        log_dir = os.environ.get("LOG_DIR", "").strip()
    if log_dir:
        log_path = Path(log_dir)
        log_file = os.path.abspath(_file_handler_path(log_path))
        existing = {
            h.baseFilename for h in logger.handlers if isinstance(h, logging.FileHandler)
        }
        if log_file not in existing:
            log_path.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(log_file, encoding="utf-8")
            file_handler.setLevel(log_level)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)

    return logger


# 创建默认日志记录器
logger = setup_logger()
