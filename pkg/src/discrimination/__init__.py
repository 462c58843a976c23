"""
判别：错误概率、Hellström、Qiu/Montanaro/Knill-Barnum 界、PGM、Chernoff 指数
"""

from .bounds import (
    BoundsReport,
    ErrorBreakdown,
    HellstromResult,
    compute_bounds,
    error_probability,
    hellstrom,
    knill_barnum_upper,
    montanaro_lower,
    pgm,
    qiu_lower,
)
from .chernoff import ChernoffReport, TensorPowerStudy, chernoff, chernoff_pair, tensor_power_study

__all__ = [
    "BoundsReport",
    "ChernoffReport",
    "ErrorBreakdown",
    "HellstromResult",
    "TensorPowerStudy",
    "chernoff",
    "chernoff_pair",
    "compute_bounds",
    "error_probability",
    "hellstrom",
    "knill_barnum_upper",
    "montanaro_lower",
    "pgm",
    "qiu_lower",
    "tensor_power_study",
]
