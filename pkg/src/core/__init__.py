"""
算子核心：稠密复矩阵的 Hermite 特征分解、谱函数、范数与幺正指数
"""

from .operators import (
    HermEigen,
    as_matrix,
    herm_eig,
    herm_fn,
    is_hermitian,
    trace_norm,
    unitary_exp,
)

__all__ = [
    "HermEigen",
    "as_matrix",
    "herm_eig",
    "herm_fn",
    "is_hermitian",
    "trace_norm",
    "unitary_exp",
]
