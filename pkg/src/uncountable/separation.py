#!/usr/bin/env python3
"""
支撑分离检验
两个不相交单位长度支撑 [0,1] 与 [c, c+1] 上的均匀分支：先取纯度窗口 [0, T]，
再由自相关衰减尺度 δ 选出 t′，验证 [t′, T] 上分支重叠小于 eps2
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np
from scipy.optimize import brentq

from ..core.exceptions import ConsistencyError, SearchFailed, ValidationError
from ..core.operators import HermEigen
from ..core.tolerances import CHECK_TOL
from ..dynamics.spectral import SpectralProfile
from ..states.fidelity import fidelity
from .nmixture import MixtureModel, assign_cells, natural_partition
from .quadrature import DensitySpec, QuadratureScheme

logger = logging.getLogger(__name__)

SCAN_POINTS = 400
ALPHA_POINTS = 4000
VERIFY_POINTS = 41
FIDELITY_POINTS = 5


@dataclass
class SeparationReport:
    """检验结果；pass 为 False 时 reason 给出失败环节"""

    c: float
    eps1: float
    eps2: float
    T: float
    t_prime: Optional[float]
    delta: Optional[float]
    purity_min: float
    overlap_max: Optional[float]
    superfid_bound: Optional[float]
    fidelity_max: Optional[float]
    passed: bool
    reason: str = ""
    reverse_order: dict = field(default_factory=dict)
    nodes: int = 0

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "eps1": self.eps1,
            "eps2": self.eps2,
            "T": self.T,
            "t_prime": self.t_prime,
            "delta": self.delta,
            "purity_min": self.purity_min,
            "overlap_max": self.overlap_max,
            "superfid_bound": self.superfid_bound,
            "fidelity_max": self.fidelity_max,
            "pass": self.passed,
            "reason": self.reason,
            "reverse_order": self.reverse_order,
            "nodes": self.nodes,
        }


class _Branches:
    """两个分支的节点向量与 Gram 矩阵量"""

    def __init__(self, model: MixtureModel, owner: np.ndarray):
        self.model = model
        self.select = [owner == 0, owner == 1]
        self.masses = [model.masses[s] / model.masses[s].sum() for s in self.select]

    def vectors(self, t: float) -> List[np.ndarray]:
        return [self.model.node_vectors(t, s) for s in self.select]

    def purities(self, t: float) -> List[float]:
        """Tr{ρ_i²} = Σ m_q m_q′ |⟨ψ_q|ψ_q′⟩|²"""
        out = []
        for phi, m in zip(self.vectors(t), self.masses):
            gram = np.abs(phi.conj().T @ phi) ** 2
            out.append(float(m @ gram @ m))
        return out

    def overlap(self, t: float):
        """Tr{ρ₁ρ₂} 以及节点对重叠的最大值 max|⟨ψ_q|ψ_q′⟩|²"""
        phi1, phi2 = self.vectors(t)
        cross = np.abs(phi1.conj().T @ phi2) ** 2
        return float(self.masses[0] @ cross @ self.masses[1]), float(cross.max())


def decay_scale(profile: SpectralProfile, eps2: float, alpha_max: float, points: int = ALPHA_POINTS) -> Optional[float]:
    """
    扫描 |a(α)|，返回最后一次超过 √eps2 之后的第一个网格点

    扫描终点仍超过阈值时返回 None。
    """
    alphas = np.linspace(0.0, alpha_max, points)
    bad = np.abs(profile.autocorrelation(alphas)) > np.sqrt(eps2)
    if bad[-1]:
        return None
    last = np.flatnonzero(bad)
    return float(alphas[last[-1] + 1]) if last.size else 0.0


def claim13_harness(
    separation: float,
    eps1: float,
    eps2: float,
    b: Union[np.ndarray, HermEigen],
    psi,
    *,
    nodes: int = 128,
    t_search: float = 10.0,
    scan_points: int = SCAN_POINTS,
    alpha_points: int = ALPHA_POINTS,
    tol: float = CHECK_TOL,
) -> SeparationReport:
    """
    支撑分离检验

    Args:
        separation: 第二个支撑的起点 c（> 1）
        eps1: 纯度容许损失
        eps2: 重叠上限
        b, psi: 生成元与参考矢量
        nodes: 每个支撑的 Gauss-Legendre 节点数
        t_search: 纯度窗口的搜索上限

    Returns:
        SeparationReport；纯度窗口无法分辨时抛出 SearchFailed
    """
    if not (0.0 < eps1 < 1.0 and 0.0 < eps2 < 1.0):
        raise ValidationError(f"eps1 and eps2 must lie in (0, 1), got {eps1}, {eps2}")
    if t_search <= 0.0:
        raise ValidationError(f"t_search must be positive, got {t_search}")

    spec = DensitySpec(kind="two-uniform", a=0.0, b=1.0, separation=float(separation))
    scheme = QuadratureScheme.gauss_legendre(spec, nodes)
    model = MixtureModel.create(spec, scheme, b, psi)
    branches = _Branches(model, assign_cells(scheme.nodes, natural_partition(spec)))
    floor = 1.0 - eps1

    # 1. 纯度窗口 [0, T]
    logger.info(f"Scanning branch purity on [0, {t_search}] with {scan_points} points")
    grid = np.linspace(0.0, t_search, scan_points)

    def margin(t: float) -> float:
        return min(branches.purities(t)) - floor

    T = float(t_search)
    for prev, cur in zip(grid[:-1], grid[1:]):
        if margin(cur) < 0.0:
            T = float(brentq(margin, prev, cur, xtol=1e-12))
            break
    if T < grid[1]:
        raise SearchFailed(f"no resolvable purity window: purity drops below {floor} before t = {grid[1]:.3e}")
    logger.info(f"Purity window T = {T:.6f}")

    window = np.linspace(0.0, T, VERIFY_POINTS)
    purity_min = float(min(min(branches.purities(t)) for t in window))

    # 2. 自相关衰减尺度 δ 与 t′
    gap = spec.gap()
    profile = SpectralProfile.from_generator(model.eigen, model.psi)
    delta = decay_scale(profile, eps2, T * (separation + 1.0), alpha_points)
    reverse = {}
    if delta is not None:
        reverse = {"t_prime": 0.5 * T, "min_separation": 1.0 + delta / (0.5 * T)}

    report = SeparationReport(
        c=float(separation), eps1=eps1, eps2=eps2, T=T, t_prime=None, delta=delta,
        purity_min=purity_min, overlap_max=None, superfid_bound=None, fidelity_max=None,
        passed=False, reverse_order=reverse, nodes=nodes,
    )
    if delta is None:
        report.reason = "autocorrelation does not decay below sqrt(eps2) on the scanned range"
        logger.info(f"Harness failed: {report.reason}")
        return report

    t_prime = delta / gap * (1.0 + 1e-9)
    report.t_prime = t_prime
    logger.info(f"Decay scale delta = {delta:.6f}, t' = {t_prime:.6f}")
    if t_prime >= T:
        report.reason = f"t' = {t_prime:.6f} is not inside the purity window [0, {T:.6f}]"
        logger.info(f"Harness failed: {report.reason}")
        return report

    # 3. [t′, T] 上的重叠与超保真度
    overlaps, bounds = [], []
    for t in np.linspace(t_prime, T, VERIFY_POINTS):
        value, pair_max = branches.overlap(t)
        if value > pair_max + tol:
            raise ConsistencyError(f"overlap {value:.3e} exceeds its node-pair maximum {pair_max:.3e} at t = {t}")
        p1, p2 = branches.purities(t)
        overlaps.append(value)
        bounds.append(value + float(np.sqrt(max(0.0, 1.0 - p1) * max(0.0, 1.0 - p2))))
    report.overlap_max = float(max(overlaps))
    report.superfid_bound = float(max(bounds))

    # 4. 直接计算分支态保真度
    fids = []
    for t, bound in zip(np.linspace(t_prime, T, FIDELITY_POINTS),
                        np.array(bounds)[np.linspace(0, VERIFY_POINTS - 1, FIDELITY_POINTS).astype(int)]):
        rho1 = model.state(t, branches.select[0])
        rho2 = model.state(t, branches.select[1])
        f = fidelity(rho1, rho2)
        if f > bound + tol:
            raise ConsistencyError(f"fidelity {f:.6e} exceeds super fidelity {bound:.6e} at t = {t}")
        fids.append(f)
    report.fidelity_max = float(max(fids))

    report.passed = bool(
        purity_min >= floor - tol
        and report.overlap_max <= eps2
        and report.fidelity_max <= eps1 + eps2 + tol
    )
    if not report.passed:
        report.reason = "overlap or fidelity exceeds its target on [t', T]"
    logger.info(
        f"Harness {'passed' if report.passed else 'failed'}: purity_min={purity_min:.4f}, "
        f"overlap_max={report.overlap_max:.3e}, fidelity_max={report.fidelity_max:.3e}"
    )
    return report
