"""
工具模块包
"""

from .logger import logger, setup_logger
from .parallel import parallel_map

__all__ = ["logger", "setup_logger", "parallel_map"]
