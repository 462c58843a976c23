#!/usr/bin/env python3
"""
保真度不等式检验
强凹性、对第一个参数的凹性、平方根权重上界与超保真度上界，在随机离散化实例上统计最小间隙
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..core.exceptions import ValidationError
from ..core.operators import herm_eig
from ..core.tolerances import CHECK_TOL
from ..states.density import DensityOperator
from ..states.fidelity import fidelity, root_fidelity, super_fidelity
from ..states.sampling import random_pure, random_state, random_weights
from ..utils.parallel import parallel_map
from .quadrature import DensitySpec, QuadratureScheme

logger = logging.getLogger(__name__)

GAPS = ("strong_concavity", "concavity", "sqrt_weight_bound", "super_fidelity")
DIM_RANGE = (2, 6)
SIZE_RANGE = (2, 5)


def _mixture(weights: Sequence[float], states: Sequence[DensityOperator]) -> DensityOperator:
    return DensityOperator.from_matrix(sum(p * s.matrix for p, s in zip(weights, states)))


def inequality_gaps(
    p: Sequence[float],
    rhos: Sequence[DensityOperator],
    q: Sequence[float],
    sigmas: Sequence[DensityOperator],
    sigma: DensityOperator,
) -> Dict[str, float]:
    """
    四个不等式的间隙（右边减左边，成立时非负）

    - strong_concavity: √F(Σp_qρ_q, Σq_qσ_q) − Σ√(p_q q_q)·√F(ρ_q, σ_q)
    - concavity: √F(Σp_qρ_q, σ) − Σp_q·√F(ρ_q, σ)
    - sqrt_weight_bound: Σ√p_q·√F(ρ_q, σ) − √F(Σp_qρ_q, σ)
    - super_fidelity: G(ρ̄, σ) − F(ρ̄, σ)，ρ̄ = Σp_qρ_q
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    rho_bar = _mixture(p, rhos)
    sigma_bar = _mixture(q, sigmas)

    pair = np.array([root_fidelity(r, s) for r, s in zip(rhos, sigmas)])
    to_sigma = np.array([root_fidelity(r, sigma) for r in rhos])
    mixed_to_sigma = root_fidelity(rho_bar, sigma)

    return {
        "strong_concavity": root_fidelity(rho_bar, sigma_bar) - float(np.sqrt(p * q) @ pair),
        "concavity": mixed_to_sigma - float(p @ to_sigma),
        "sqrt_weight_bound": float(np.sqrt(p) @ to_sigma) - mixed_to_sigma,
        "super_fidelity": super_fidelity(rho_bar, sigma) - fidelity(rho_bar, sigma),
    }


def _random_generator(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (g + g.conj().T)


def _quadrature_instance(dim: int, size: int, rng: np.random.Generator):
    """均匀密度上的 Gauss-Legendre 节点：ρ_q = U(t x_q)|ψ⟩⟨ψ|U†，σ_q 同一族作用在另一个态上"""
    spec = DensitySpec(kind="uniform", a=0.0, b=1.0)
    scheme = QuadratureScheme.gauss_legendre(spec, size)
    p = scheme.masses(spec)
    p = p / p.sum()
    eigen = herm_eig(_random_generator(dim, rng))
    t = float(rng.uniform(0.0, 5.0))
    psi = random_pure(dim, rng)
    other = random_state(dim, rng)
    rhos = [DensityOperator.pure(eigen.exp_vector(t * x, psi.vector)) for x in scheme.nodes]
    sigmas = [DensityOperator.from_trusted(eigen.conjugate(t * x, other.matrix)) for x in scheme.nodes]
    return p, rhos, random_weights(size, rng), sigmas


def _dirichlet_instance(dim: int, size: int, rng: np.random.Generator):
    p = random_weights(size, rng)
    rhos = [random_state(dim, rng) for _ in range(size)]
    q = random_weights(size, rng)
    sigmas = [random_state(dim, rng) for _ in range(size)]
    return p, rhos, q, sigmas


def run_trial(seed: int, trial: int) -> Dict[str, float]:
    """单次实例；偶数次用求积族，奇数次用 Dirichlet 权重的随机态"""
    rng = np.random.default_rng([seed, trial])
    dim = int(rng.integers(DIM_RANGE[0], DIM_RANGE[1] + 1))
    size = int(rng.integers(SIZE_RANGE[0], SIZE_RANGE[1] + 1))
    family, build = ("quadrature", _quadrature_instance) if trial % 2 == 0 else ("dirichlet", _dirichlet_instance)
    p, rhos, q, sigmas = build(dim, size, rng)
    sigma = random_state(dim, rng)
    gaps = inequality_gaps(p, rhos, q, sigmas, sigma)
    gaps.update({"trial": trial, "dim": dim, "size": size, "family": family})
    return gaps


@dataclass
class InequalityReport:
    """最小间隙与对应的实例"""

    trials: int
    seed: int
    min_gaps: Dict[str, float]
    worst_trial: Dict[str, int]
    rows: List[dict] = field(default_factory=list)
    tol: float = CHECK_TOL

    @property
    def passed(self) -> bool:
        return all(v >= -self.tol for v in self.min_gaps.values())

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "min_gaps": self.min_gaps,
            "worst_trial": self.worst_trial,
            "pass": self.passed,
        }


def fidelity_inequality_suite(
    trials: int,
    seed: int = 0,
    *,
    max_workers: Optional[int] = None,
) -> InequalityReport:
    """
    在 trials 个带种子的随机实例上检验保真度不等式

    每个实例使用独立的 Generator(seed, trial)，结果与线程数无关。
    """
    if trials < 1:
        raise ValidationError(f"trials must be at least 1, got {trials}")
    logger.info(f"Running fidelity inequality suite: {trials} trial(s), seed {seed}")
    rows = parallel_map(lambda k: run_trial(seed, k), list(range(trials)), max_workers, "inequality trials")

    min_gaps, worst = {}, {}
    for name in GAPS:
        values = [row[name] for row in rows]
        k = int(np.argmin(values))
        min_gaps[name] = float(values[k])
        worst[name] = int(rows[k]["trial"])
    report = InequalityReport(trials=trials, seed=seed, min_gaps=min_gaps, worst_trial=worst, rows=rows)
    logger.info("Inequality suite minimum gaps: " + ", ".join(f"{k}={v:.3e}" for k, v in min_gaps.items()))
    return report
