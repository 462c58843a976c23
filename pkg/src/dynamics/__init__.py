"""
URM 动力学：演化、谱诊断、时间扫描与可解性判定
"""

from .evolution import (
    AcModel,
    ComponentDecomposition,
    QubitExample,
    UnitaryFamily,
    component_kb_bound,
    discretized_ac_model,
    evolve_ensemble,
    qubit_example,
    qubit_period,
)
from .spectral import SpectralProfile, autocorrelation, cross_correlation, wiener_average
from .sweeps import SweepResult, TimeGrid, Verdict, autocorrelation_sweep, bound_sweep, solvability_verdict

__all__ = [
    "AcModel",
    "ComponentDecomposition",
    "QubitExample",
    "SpectralProfile",
    "SweepResult",
    "TimeGrid",
    "UnitaryFamily",
    "Verdict",
    "autocorrelation",
    "autocorrelation_sweep",
    "bound_sweep",
    "component_kb_bound",
    "cross_correlation",
    "discretized_ac_model",
    "evolve_ensemble",
    "qubit_example",
    "qubit_period",
    "solvability_verdict",
    "wiener_average",
]
