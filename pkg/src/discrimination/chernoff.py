#!/usr/bin/env python3
"""
量子 Chernoff 指数与张量幂渐近
ξ(ρ, σ) = −log min_{s∈[0,1]} Tr{ρ^s σ^{1−s}}；系综指数取所有成对指数的最小值
"""

import itertools
import logging
import math
from dataclasses import asdict, dataclass, field
from functools import reduce
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from ..core.exceptions import ConsistencyError, ValidationError
from ..core.operators import support_mask
from ..core.tolerances import CHECK_TOL
from ..states.density import DensityOperator, Ensemble, normalized_vector
from ..utils.parallel import parallel_map
from .bounds import hellstrom

logger = logging.getLogger(__name__)

GRID_POINTS = 101
S_XATOL = 1e-6
MAX_TENSOR_POWER = 24
# 显式构造 ρ^{⊗n} 时的最大总维数
EXPLICIT_DIM_CAP = 1024


class _ChernoffObjective:
    """s ↦ Tr{ρ^s σ^{1−s}}，在两个特征基中展开：Σ_kl λ_k^s μ_l^{1−s} |⟨v_k|w_l⟩|²"""

    def __init__(self, rho: DensityOperator, sigma: DensityOperator):
        lam, v = np.linalg.eigh(rho.matrix)
        mu, w = np.linalg.eigh(sigma.matrix)
        self.lam_mask = support_mask(lam)
        self.mu_mask = support_mask(mu)
        self.lam = np.where(self.lam_mask, lam, 1.0)
        self.mu = np.where(self.mu_mask, mu, 1.0)
        self.weights = np.abs(v.conj().T @ w) ** 2

    def _powers(self, values: np.ndarray, mask: np.ndarray, s: np.ndarray) -> np.ndarray:
        # 零特征值上 0^s 取 0（s = 0 时即支撑投影）
        return np.where(mask[None, :], values[None, :] ** s[:, None], 0.0)

    def __call__(self, s) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        a = self._powers(self.lam, self.lam_mask, s)
        b = self._powers(self.mu, self.mu_mask, 1.0 - s)
        return np.einsum("gk,kl,gl->g", a, self.weights, b)


@dataclass(frozen=True)
class PairExponent:
    i: int
    j: int
    exponent: float
    s_min: float
    q_min: float

    @property
    def orthogonal_support(self) -> bool:
        return math.isinf(self.exponent)

    def to_dict(self) -> dict:
        return {
            "i": self.i,
            "j": self.j,
            "exponent": None if self.orthogonal_support else self.exponent,
            "s_min": self.s_min,
            "q_min": self.q_min,
            "orthogonal_support": self.orthogonal_support,
        }


def chernoff_pair(
    rho: DensityOperator,
    sigma: DensityOperator,
    *,
    grid_points: int = GRID_POINTS,
    xatol: float = S_XATOL,
) -> Tuple[float, float, float]:
    """
    单对 Chernoff 指数

    先在 [0, 1] 的均匀粗网格上取最小点，再在相邻网格区间内做有界一维极小化。

    Returns:
        (ξ, 极小点 s, 极小值 Q)；支撑正交时 ξ = inf
    """
    objective = _ChernoffObjective(rho, sigma)
    grid = np.linspace(0.0, 1.0, grid_points)
    values = objective(grid)
    k = int(np.argmin(values))
    s_best, q_best = float(grid[k]), float(values[k])

    lo, hi = grid[max(0, k - 1)], grid[min(grid_points - 1, k + 1)]
    if hi > lo:
        result = minimize_scalar(lambda s: float(objective(s)[0]), bounds=(lo, hi),
                                 method="bounded", options={"xatol": xatol})
        if result.fun < q_best:
            s_best, q_best = float(result.x), float(result.fun)

    if q_best <= 0.0:
        return math.inf, s_best, max(0.0, q_best)
    return max(0.0, -math.log(q_best)), s_best, q_best


@dataclass(frozen=True)
class ChernoffReport:
    """成对 Chernoff 指数与系综指数（成对最小值）"""

    pairs: List[PairExponent]
    exponent: float

    def to_dict(self) -> dict:
        return {
            "pairs": [p.to_dict() for p in self.pairs],
            "exponent": None if math.isinf(self.exponent) else self.exponent,
        }


def chernoff(
    ensemble: Ensemble,
    *,
    grid_points: int = GRID_POINTS,
    max_workers: Optional[int] = None,
) -> ChernoffReport:
    """计算所有无序对 (i < j) 的 Chernoff 指数；指数关于交换对称"""
    if ensemble.size < 2:
        raise ValidationError("Chernoff exponent needs at least two ensemble members")
    states = ensemble.states
    index_pairs = list(itertools.combinations(range(ensemble.size), 2))

    def solve(pair):
        i, j = pair
        xi, s, q = chernoff_pair(states[i], states[j], grid_points=grid_points)
        return PairExponent(i=i, j=j, exponent=xi, s_min=s, q_min=q)

    pairs = parallel_map(solve, index_pairs, max_workers=max_workers, label="chernoff pairs")
    return ChernoffReport(pairs=pairs, exponent=min(p.exponent for p in pairs))


@dataclass(frozen=True)
class TensorPowerRow:
    n: int
    error: float
    rate: Optional[float]
    explicit_error: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class TensorPowerStudy:
    """张量幂研究：p_E(n) 闭式、显式交叉校验与速率 −log p_E(n)/n"""

    p1: float
    p2: float
    overlap: float
    exponent: float
    rows: List[TensorPowerRow] = field(default_factory=list)

    def sandwich_holds(self, tol: float = CHECK_TOL) -> bool:
        """所有 n 上 rate_n ≥ ξ/3"""
        if math.isinf(self.exponent):
            return all(r.error == 0.0 for r in self.rows)
        return all(r.rate is not None and r.rate >= self.exponent / 3.0 - tol for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "p1": self.p1,
            "p2": self.p2,
            "overlap": self.overlap,
            "exponent": None if math.isinf(self.exponent) else self.exponent,
            "sandwich_holds": self.sandwich_holds(),
            "rows": [r.to_dict() for r in self.rows],
        }


def tensor_power_error(p1: float, p2: float, overlap: float, n: int) -> float:
    """纯态 n 次张量幂的 Hellström 误差 ½(1 − √(1 − 4p₁p₂Fⁿ))，按无抵消形式计算"""
    x = 4.0 * p1 * p2 * overlap ** n
    return 0.5 * x / (1.0 + math.sqrt(max(0.0, 1.0 - x)))


def tensor_power_study(
    p1: float,
    psi1,
    p2: float,
    psi2,
    n_max: int,
    *,
    explicit_n_cap: int = 6,
    tol: float = CHECK_TOL,
) -> TensorPowerStudy:
    """
    张量幂渐近研究

    Args:
        p1, p2: 先验概率
        psi1, psi2: 单位态矢量
        n_max: 最大副本数（≤ 24）
        explicit_n_cap: n 不超过该值（且总维数不超过 EXPLICIT_DIM_CAP）时显式构造并交叉校验

    Returns:
        TensorPowerStudy；显式与闭式差超过 tol 时抛出 ConsistencyError
    """
    if not 1 <= n_max <= MAX_TENSOR_POWER:
        raise ValidationError(f"n_max must lie in [1, {MAX_TENSOR_POWER}], got {n_max}")
    v1 = normalized_vector(psi1)
    v2 = normalized_vector(psi2)
    if v1.size != v2.size:
        raise ValidationError("state vectors have different dimensions")
    f = float(abs(np.vdot(v1, v2)) ** 2)
    xi, _, _ = chernoff_pair(DensityOperator.pure(v1), DensityOperator.pure(v2))

    rows = []
    for n in range(1, n_max + 1):
        error = tensor_power_error(p1, p2, f, n)
        rate = -math.log(error) / n if error > 0.0 else None
        explicit = None
        if n <= explicit_n_cap and v1.size ** n <= EXPLICIT_DIM_CAP:
            t1 = reduce(np.kron, [v1] * n)
            t2 = reduce(np.kron, [v2] * n)
            explicit = hellstrom(p1, DensityOperator.pure(t1), p2, DensityOperator.pure(t2)).error
            if abs(explicit - error) > tol:
                raise ConsistencyError(f"n={n}: explicit error {explicit:.15f} vs closed form {error:.15f}")
        rows.append(TensorPowerRow(n=n, error=error, rate=rate, explicit_error=explicit))
        logger.debug(f"tensor power n={n}: p_E={error:.6e}, rate={rate}")

    return TensorPowerStudy(p1=p1, p2=p2, overlap=f, exponent=xi, rows=rows)
