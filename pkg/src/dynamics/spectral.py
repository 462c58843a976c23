#!/usr/bin/env python3
"""
谱测度诊断
自相关 a(t) = ⟨ψ|e^{-itB}|ψ⟩ = Σ_k w_k e^{-itλ_k}、互相关与 Wiener 平均
"""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.integrate import trapezoid

from ..core.exceptions import ValidationError
from ..core.operators import HermEigen, herm_eig
from ..core.tolerances import TRACE_TOL
from ..states.density import normalized_vector

logger = logging.getLogger(__name__)

# 逐块计算 e^{-itλ}，限制内存
_CHUNK = 4096

Generator = Union[np.ndarray, HermEigen]


def _eigen(b: Generator) -> HermEigen:
    return b if isinstance(b, HermEigen) else herm_eig(b)


def _fourier(eigenvalues: np.ndarray, amplitudes: np.ndarray, t) -> Union[complex, np.ndarray]:
    """Σ_k c_k e^{-itλ_k}，t 为标量或数组"""
    times = np.asarray(t, dtype=float)
    flat = np.atleast_1d(times).reshape(-1)
    out = np.empty(flat.size, dtype=complex)
    for start in range(0, flat.size, _CHUNK):
        chunk = flat[start:start + _CHUNK]
        out[start:start + _CHUNK] = np.exp(-1j * np.outer(chunk, eigenvalues)) @ amplitudes
    if times.ndim == 0:
        return complex(out[0])
    return out.reshape(times.shape)


@dataclass(frozen=True, eq=False)
class SpectralProfile:
    """B 的特征值 λ_k 与参考矢量的谱权重 w_k = |⟨φ_k|ψ⟩|²"""

    eigenvalues: np.ndarray
    weights: np.ndarray

    @classmethod
    def from_generator(cls, b: Generator, psi, *, trace_tol: float = TRACE_TOL) -> "SpectralProfile":
        eig = _eigen(b)
        v = normalized_vector(psi, trace_tol)
        if v.size != eig.dim:
            raise ValidationError(f"vector dimension {v.size} differs from generator dimension {eig.dim}")
        w = np.abs(eig.eigenvectors.conj().T @ v) ** 2
        return cls(eigenvalues=eig.eigenvalues, weights=w)

    def autocorrelation(self, t):
        return _fourier(self.eigenvalues, self.weights.astype(complex), t)

    def point_mass_sum(self, tol: float = 1e-12) -> float:
        """Σ（相同特征值上的权重和）²，即 Wiener 平均的长时极限"""
        order = np.argsort(self.eigenvalues, kind="stable")
        lam, w = self.eigenvalues[order], self.weights[order]
        total, cluster = 0.0, w[0]
        for k in range(1, lam.size):
            if lam[k] - lam[k - 1] <= tol:
                cluster += w[k]
            else:
                total += cluster * cluster
                cluster = w[k]
        return float(total + cluster * cluster)


def autocorrelation(b: Generator, psi, t):
    """⟨ψ|e^{-itB}|ψ⟩"""
    return SpectralProfile.from_generator(b, psi).autocorrelation(t)


def cross_correlation(b: Generator, phi, psi, t, *, trace_tol: float = TRACE_TOL):
    """⟨φ|e^{-itB}|ψ⟩ = Σ_k ⟨φ|v_k⟩⟨v_k|ψ⟩ e^{-itλ_k}"""
    eig = _eigen(b)
    f = normalized_vector(phi, trace_tol)
    g = normalized_vector(psi, trace_tol)
    amplitudes = (eig.eigenvectors.conj().T @ f).conj() * (eig.eigenvectors.conj().T @ g)
    return _fourier(eig.eigenvalues, amplitudes, t)


def wiener_average(b: Generator, psi, T: float, n_samples: int) -> float:
    """
    (1/T)∫₀ᵀ |a(t)|² dt，梯形公式

    T → ∞ 时收敛到谱测度点部分的权重平方和。
    """
    if T <= 0.0:
        raise ValidationError(f"averaging time must be positive, got {T}")
    if n_samples < 2:
        raise ValidationError(f"need at least two samples, got {n_samples}")
    profile = SpectralProfile.from_generator(b, psi)
    times = np.linspace(0.0, T, n_samples)
    values = np.abs(profile.autocorrelation(times)) ** 2
    return float(trapezoid(values, times) / T)
