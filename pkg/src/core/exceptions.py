"""
异常定义
ValidationError 表示输入不满足前置条件，NumericalFailure 表示计算本身失败
"""

from typing import Optional


class QsdLabError(Exception):
    """qsd-lab 所有异常的基类"""


class ValidationError(QsdLabError, ValueError):
    """输入不满足前置条件"""


class NumericalFailure(QsdLabError):
    """数值计算失败或内部交叉校验不一致"""


class NotHermitian(ValidationError):
    pass


class NotPSD(ValidationError):
    pass


class NotNormalized(ValidationError):
    pass


class InvalidState(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class InvalidPovm(ValidationError):
    pass


class UnsupportedCombination(ValidationError):
    pass


class WindowOutOfRange(ValidationError):
    pass


class SchemeMismatch(ValidationError):
    pass


class BadPartition(ValidationError):
    pass


class RankOutOfRange(ValidationError):
    pass


class NoConvergence(NumericalFailure):
    pass


class DegenerateMixture(NumericalFailure):
    pass


class SearchFailed(NumericalFailure):
    pass


class ConsistencyError(NumericalFailure):
    """两条独立计算路径的结果超出容差"""


class ScenarioParseError(QsdLabError):
    """场景文件不是合法 JSON"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        super().__init__(message)
        self.line = line
        self.column = column


class ScenarioValidationError(QsdLabError):
    """场景参数校验失败"""


class ConfigError(QsdLabError):
    """运行配置无效"""
