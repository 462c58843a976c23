#!/usr/bin/env python3
"""
随机采样
Ginibre 随机密度矩阵、Haar 随机幺正与投影测量；全部由调用方传入的 Generator 驱动
"""

from typing import Optional

import numpy as np
from scipy.stats import unitary_group

from .density import DensityOperator, Ensemble, Povm


def ginibre(dim: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))


def random_density(dim: int, rng: np.random.Generator, rank: Optional[int] = None) -> DensityOperator:
    """ρ = GG†/Tr{GG†}"""
    g = ginibre(dim, rank or dim, rng)
    m = g @ g.conj().T
    return DensityOperator.from_matrix(m / np.real(np.trace(m)))


def random_pure(dim: int, rng: np.random.Generator) -> DensityOperator:
    v = ginibre(dim, 1, rng)[:, 0]
    return DensityOperator.pure(v / np.linalg.norm(v))


def random_state(dim: int, rng: np.random.Generator, pure_probability: float = 0.5) -> DensityOperator:
    if rng.random() < pure_probability:
        return random_pure(dim, rng)
    return random_density(dim, rng, rank=int(rng.integers(1, dim + 1)))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar 随机幺正"""
    if dim == 1:
        return np.exp(2j * np.pi * rng.random()).reshape(1, 1)
    return unitary_group.rvs(dim, random_state=rng)


def random_projective_povm(dim: int, rng: np.random.Generator) -> Povm:
    return Povm.projective(random_unitary(dim, rng))


def random_weights(size: int, rng: np.random.Generator) -> np.ndarray:
    w = rng.dirichlet(np.ones(size))
    # 防止数值上出现的零权重被丢弃，影响系综规模
    w = np.maximum(w, 1e-6)
    return w / w.sum()


def random_ensemble(size: int, dim: int, rng: np.random.Generator, pure_probability: float = 0.5) -> Ensemble:
    weights = random_weights(size, rng)
    states = [random_state(dim, rng, pure_probability) for _ in range(size)]
    return Ensemble.from_pairs(zip(weights, states))
