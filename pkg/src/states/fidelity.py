#!/usr/bin/env python3
"""
保真度族
保真度 F = ‖√ρ√σ‖₁²、超保真度、纯度，以及纯化保真度的蒙特卡洛检验
"""

import logging
from dataclasses import asdict, dataclass

import numpy as np
from scipy.linalg import polar

from ..core.exceptions import ConsistencyError, DimensionMismatch
from ..core.operators import trace_norm
from ..core.tolerances import CHECK_TOL
from .density import DensityOperator
from .sampling import random_unitary

logger = logging.getLogger(__name__)


def _check_dims(rho: DensityOperator, sigma: DensityOperator) -> None:
    if rho.dim != sigma.dim:
        raise DimensionMismatch(f"states have different dimensions: {rho.dim} vs {sigma.dim}")


def root_fidelity(rho: DensityOperator, sigma: DensityOperator) -> float:
    """
    √F = ‖√ρ√σ‖₁，截断到 [0, 1]

    有态矢量时走纯态捷径：|⟨ψ|φ⟩| 或 √⟨ψ|ρ|ψ⟩。
    """
    _check_dims(rho, sigma)
    if rho.vector is not None and sigma.vector is not None:
        value = abs(np.vdot(rho.vector, sigma.vector))
    elif sigma.vector is not None:
        value = np.sqrt(max(0.0, float(np.real(np.vdot(sigma.vector, rho.matrix @ sigma.vector)))))
    elif rho.vector is not None:
        value = np.sqrt(max(0.0, float(np.real(np.vdot(rho.vector, sigma.matrix @ rho.vector)))))
    else:
        value = trace_norm(rho.sqrt() @ sigma.sqrt())
    return float(min(1.0, max(0.0, value)))


def fidelity(rho: DensityOperator, sigma: DensityOperator) -> float:
    """F(ρ, σ) = ‖√ρ√σ‖₁²（奇异值之和的平方）"""
    return root_fidelity(rho, sigma) ** 2


def overlap(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Tr{ρσ}"""
    _check_dims(rho, sigma)
    return float(np.real(np.sum(rho.matrix * sigma.matrix.conj())))


def purity(rho: DensityOperator) -> float:
    """Tr{ρ²}"""
    if rho.vector is not None:
        return 1.0
    return float(np.real(np.sum(np.abs(rho.matrix) ** 2)))


def super_fidelity(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Tr{ρσ} + √((1 − Tr{ρ²})(1 − Tr{σ²}))"""
    _check_dims(rho, sigma)
    mixedness = max(0.0, 1.0 - purity(rho)) * max(0.0, 1.0 - purity(sigma))
    return overlap(rho, sigma) + float(np.sqrt(mixedness))


@dataclass(frozen=True)
class PurificationReport:
    """纯化检验结果"""

    trials: int
    fidelity: float
    max_overlap: float
    attained: float
    ratio: float

    def to_dict(self) -> dict:
        return asdict(self)


def purification_fidelity_check(
    rho: DensityOperator,
    sigma: DensityOperator,
    trials: int,
    rng: np.random.Generator,
    *,
    tol: float = CHECK_TOL,
) -> PurificationReport:
    """
    纯化保真度检验

    以矩阵形式表示 H⊗H 中的纯化：|ξ⟩ ↔ √ρ，σ 的任意纯化 ↔ √σ·U（U 幺正），
    于是 |⟨ξ|χ⟩|² = |Tr{√ρ√σ U}|²。随机采样 Haar 幺正 U 得到下界估计，
    并用极分解给出达到上确界的纯化作为对照。

    Args:
        rho, sigma: 同维密度算子
        trials: 随机纯化次数
        rng: 随机数生成器

    Returns:
        PurificationReport；采样最大值超过 F + tol 时抛出 ConsistencyError
    """
    _check_dims(rho, sigma)
    f = fidelity(rho, sigma)
    a = rho.sqrt() @ sigma.sqrt()

    best = 0.0
    for _ in range(trials):
        u = random_unitary(rho.dim, rng)
        best = max(best, float(abs(np.trace(a @ u)) ** 2))

    w, _ = polar(a)
    attained = float(abs(np.trace(a @ w.conj().T)) ** 2)

    if best > f + tol:
        raise ConsistencyError(f"sampled purification overlap {best:.12f} exceeds fidelity {f:.12f}")
    if abs(attained - f) > 10 * tol:
        raise ConsistencyError(f"optimal purification overlap {attained:.12f} differs from fidelity {f:.12f}")

    ratio = best / f if f > 0.0 else 1.0
    logger.debug(f"Purification check: F={f:.6f}, best sampled={best:.6f} over {trials} trial(s)")
    return PurificationReport(trials=trials, fidelity=f, max_overlap=best, attained=attained, ratio=ratio)
