"""
有限秩截断与收敛研究
"""

from .studies import (
    CSV_COLUMNS,
    Truncation,
    TruncationStudy,
    fidelity_convergence_study,
    geometric_state,
    kb_convergence_study,
    truncate,
    truncation_study,
)

__all__ = [
    "CSV_COLUMNS",
    "Truncation",
    "TruncationStudy",
    "truncate",
    "geometric_state",
    "fidelity_convergence_study",
    "kb_convergence_study",
    "truncation_study",
]
