#!/usr/bin/env python3
"""
算子核心模块
Hermite 特征分解、谱矩阵函数 f(A) = V f(Λ) V†、迹范数与幺正指数 e^{-iθB}

默认特征求解器为 LAPACK（numpy.linalg.eigh）；循环 Jacobi 作为可选求解器保留，
两者输出都按特征值升序稳定排序，相等特征值保持原下标顺序。
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .exceptions import DimensionMismatch, NoConvergence, NotHermitian, NotPSD, ValidationError
from .tolerances import EIG_TOL, HERM_TOL, JACOBI_MAX_SWEEPS, PSD_CLIP_REL

logger = logging.getLogger(__name__)

EIGENSOLVERS = ("lapack", "jacobi")


@dataclass(frozen=True, eq=False)
class HermEigen:
    """Hermite 矩阵的谱分解：升序特征值与对应的正交归一特征向量（列）"""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.shape[0])

    def reconstruct(self) -> np.ndarray:
        """V Λ V†"""
        return self.apply(self.eigenvalues)

    def apply(self, values: np.ndarray) -> np.ndarray:
        """V diag(values) V†，values 按特征值顺序给出"""
        v = self.eigenvectors
        return (v * values) @ v.conj().T

    def phases(self, theta: float) -> np.ndarray:
        return np.exp(-1j * theta * self.eigenvalues)

    def exp(self, theta: float) -> np.ndarray:
        """e^{-iθB} = V e^{-iθΛ} V†"""
        return self.apply(self.phases(theta))

    def exp_vector(self, theta: float, vec: np.ndarray) -> np.ndarray:
        """e^{-iθB}|ψ⟩，只做两次矩阵-向量乘法"""
        v = self.eigenvectors
        return v @ (self.phases(theta) * (v.conj().T @ vec))

    def conjugate(self, theta: float, rho: np.ndarray) -> np.ndarray:
        """e^{-iθB} ρ e^{iθB}"""
        v = self.eigenvectors
        ph = self.phases(theta)
        inner = v.conj().T @ rho @ v
        inner = ph[:, None] * inner * ph.conj()[None, :]
        return v @ inner @ v.conj().T


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """转换为复方阵并检查有限性"""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name} has non-finite entries")
    return m


def hermiticity_error(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def is_hermitian(a, herm_tol: float = HERM_TOL) -> bool:
    return hermiticity_error(as_matrix(a)) <= herm_tol


def _sorted(eigenvalues: np.ndarray, eigenvectors: np.ndarray) -> HermEigen:
    # 稳定排序：相等特征值保持原下标顺序
    order = np.argsort(eigenvalues, kind="stable")
    return HermEigen(eigenvalues=np.asarray(eigenvalues[order], dtype=float),
                     eigenvectors=np.ascontiguousarray(eigenvectors[:, order]))


def _jacobi_eigh(a: np.ndarray, eig_tol: float, max_sweeps: int):
    """
    复 Hermite 矩阵的循环 Jacobi 迭代

    每次旋转先用相位把 a_pq 变成实数，再做实对称 Jacobi 旋转，
    即 G = diag(1, e^{-iφ}) · [[c, s], [-s, c]]，A ← G† A G。
    """
    work = a.copy()
    n = work.shape[0]
    vecs = np.eye(n, dtype=complex)
    target = eig_tol * max(1.0, float(np.max(np.abs(a))))
    off_mask = ~np.eye(n, dtype=bool)

    for sweep in range(max_sweeps):
        off = float(np.max(np.abs(work[off_mask]))) if n > 1 else 0.0
        if off <= target:
            logger.debug(f"Jacobi converged after {sweep} sweep(s), off-diagonal max {off:.3e}")
            return np.real(np.diag(work)).copy(), vecs

        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = work[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = np.conj(apq / r)
                theta = (work[q, q].real - work[p, p].real) / (2.0 * r)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                g = np.array([[c, s], [-s * phase, c * phase]], dtype=complex)
                idx = [p, q]
                work[:, idx] = work[:, idx] @ g
                work[idx, :] = g.conj().T @ work[idx, :]
                work[p, q] = 0.0
                work[q, p] = 0.0
                work[p, p] = work[p, p].real
                work[q, q] = work[q, q].real
                vecs[:, idx] = vecs[:, idx] @ g

    raise NoConvergence(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")


def herm_eig(
    a,
    *,
    herm_tol: float = HERM_TOL,
    method: str = "lapack",
    eig_tol: float = EIG_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> HermEigen:
    """
    Hermite 特征分解

    Args:
        a: Hermite 方阵（容差 herm_tol 内）
        method: "lapack" 或 "jacobi"
        eig_tol: Jacobi 收敛容差
        max_sweeps: Jacobi 最大扫描次数

    Returns:
        HermEigen，特征值升序
    """
    m = as_matrix(a)
    err = hermiticity_error(m)
    if err > herm_tol:
        raise NotHermitian(f"matrix is not Hermitian: max |A - A†| = {err:.3e} > {herm_tol:.1e}")
    # 对称化，去掉容差内的反 Hermite 部分
    m = 0.5 * (m + m.conj().T)

    if method == "lapack":
        w, v = np.linalg.eigh(m)
    elif method == "jacobi":
        w, v = _jacobi_eigh(m, eig_tol, max_sweeps)
    else:
        raise ValueError(f"unknown eigensolver '{method}', expected one of {EIGENSOLVERS}")
    return _sorted(w, v)


def psd_clip_tolerance(eigenvalues: np.ndarray, psd_clip_rel: float = PSD_CLIP_REL) -> float:
    scale = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    return psd_clip_rel * scale


def clip_psd(eigenvalues: np.ndarray, psd_clip_rel: float = PSD_CLIP_REL) -> np.ndarray:
    """容差内的负特征值裁剪为 0，超出容差抛出 NotPSD"""
    tol = psd_clip_tolerance(eigenvalues, psd_clip_rel)
    lowest = float(np.min(eigenvalues)) if eigenvalues.size else 0.0
    if lowest < -tol:
        raise NotPSD(f"eigenvalue {lowest:.3e} below -{tol:.3e}")
    # 舍入噪声量级的特征值视为 0，避免 √λ 放大噪声
    noise = eigenvalues.size * np.finfo(float).eps * float(np.max(np.abs(eigenvalues)))
    return np.where(eigenvalues > noise, eigenvalues, 0.0)


def support_mask(eigenvalues: np.ndarray, psd_clip_rel: float = PSD_CLIP_REL) -> np.ndarray:
    """支撑子空间：特征值大于裁剪容差"""
    return eigenvalues > psd_clip_tolerance(eigenvalues, psd_clip_rel)


def _power(s: float, psd_clip_rel: float) -> Callable[[np.ndarray], np.ndarray]:
    if not 0.0 <= s <= 1.0:
        raise ValidationError(f"power exponent must lie in [0, 1], got {s}")

    def fn(eigenvalues: np.ndarray) -> np.ndarray:
        clipped = clip_psd(eigenvalues, psd_clip_rel)
        if s == 0.0:
            # 0^0 约定为支撑投影
            return support_mask(eigenvalues, psd_clip_rel).astype(float)
        return np.power(clipped, s)

    return fn


def herm_fn(
    a: Union[np.ndarray, HermEigen],
    fn: str,
    *,
    s: Optional[float] = None,
    herm_tol: float = HERM_TOL,
    psd_clip_rel: float = PSD_CLIP_REL,
) -> np.ndarray:
    """
    谱矩阵函数 V f(Λ) V†

    Args:
        a: Hermite 矩阵或已有的 HermEigen
        fn: "sqrt"、"abs" 或 "power"（需同时给出 s ∈ [0, 1]）
        s: power 的指数

    Returns:
        f(A)
    """
    eig = a if isinstance(a, HermEigen) else herm_eig(a, herm_tol=herm_tol)
    lam = eig.eigenvalues

    if fn == "sqrt":
        values = np.sqrt(clip_psd(lam, psd_clip_rel))
    elif fn == "abs":
        values = np.abs(lam)
    elif fn == "power":
        if s is None:
            raise ValidationError("power requires an exponent s")
        values = _power(float(s), psd_clip_rel)(lam)
    else:
        raise ValidationError(f"unknown matrix function '{fn}'")
    return eig.apply(values)


def trace_norm(a) -> float:
    """‖A‖₁：奇异值之和"""
    m = as_matrix(a)
    return float(np.linalg.norm(m, ord="nuc"))


def unitary_exp(b: Union[np.ndarray, HermEigen], theta: float, *, herm_tol: float = HERM_TOL) -> np.ndarray:
    """e^{-iθB} = V e^{-iθΛ} V†"""
    eig = b if isinstance(b, HermEigen) else herm_eig(b, herm_tol=herm_tol)
    return eig.exp(float(theta))
