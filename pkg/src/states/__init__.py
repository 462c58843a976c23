"""
量子态与系综：密度算子、系综、POVM、保真度族、随机采样与 JSON 编解码
"""

from .density import DensityOperator, Ensemble, Povm, apply_measurement, mix, outcome_probability
from .fidelity import (
    PurificationReport,
    fidelity,
    overlap,
    purification_fidelity_check,
    purity,
    root_fidelity,
    super_fidelity,
)

__all__ = [
    "DensityOperator",
    "Ensemble",
    "Povm",
    "PurificationReport",
    "apply_measurement",
    "fidelity",
    "mix",
    "outcome_probability",
    "overlap",
    "purification_fidelity_check",
    "purity",
    "root_fidelity",
    "super_fidelity",
]
