"""
不可数混合：密度与求积、N-混合、支撑分离检验与保真度不等式
"""

from .inequalities import InequalityReport, fidelity_inequality_suite, inequality_gaps
from .nmixture import (
    MixtureModel,
    NMixture,
    assign_cells,
    n_mixture,
    natural_partition,
    split_partition,
    uncountable_mixture,
    uqsd_pipeline,
)
from .quadrature import DENSITY_KINDS, DensitySpec, QuadratureScheme, resolving_nodes
from .separation import SeparationReport, claim13_harness, decay_scale

__all__ = [
    "DENSITY_KINDS",
    "DensitySpec",
    "QuadratureScheme",
    "resolving_nodes",
    "MixtureModel",
    "NMixture",
    "assign_cells",
    "natural_partition",
    "split_partition",
    "uncountable_mixture",
    "n_mixture",
    "uqsd_pipeline",
    "SeparationReport",
    "claim13_harness",
    "decay_scale",
    "InequalityReport",
    "inequality_gaps",
    "fidelity_inequality_suite",
]
