"""
输出：CSV/JSON 产物、摘要与报告
"""

from .formatter import OutputFormatter, format_number, to_jsonable

__all__ = ["OutputFormatter", "format_number", "to_jsonable"]
