#!/usr/bin/env python3
"""
不可数混合与 N-混合
ρ_t = ∫p(x) U(tx)|ψ⟩⟨ψ|U(tx)† dx 的求积表示，按支撑划分改写为有限凸组合 Σ p_i ρ_{i,t}，
并交给判别模块计算界（UQSD 流水线）
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.exceptions import BadPartition, ValidationError
from ..core.operators import HermEigen, herm_eig, trace_norm
from ..core.tolerances import QUAD_TOL
from ..discrimination.bounds import BoundsReport, compute_bounds
from ..states.density import DensityOperator, Ensemble, normalized_vector
from .quadrature import DensitySpec, Interval, QuadratureScheme

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MixtureModel:
    """密度、求积方案、生成元与参考矢量；按时间生成节点态"""

    spec: DensitySpec
    scheme: QuadratureScheme
    eigen: HermEigen
    psi: np.ndarray
    masses: np.ndarray
    total_mass: float

    @classmethod
    def create(
        cls,
        spec: DensitySpec,
        scheme: QuadratureScheme,
        b: Union[np.ndarray, HermEigen],
        psi,
        *,
        quad_tol: float = QUAD_TOL,
    ) -> "MixtureModel":
        total = scheme.check(spec, quad_tol)
        eigen = b if isinstance(b, HermEigen) else herm_eig(b)
        v = normalized_vector(psi)
        if v.size != eigen.dim:
            raise ValidationError(f"vector dimension {v.size} differs from generator dimension {eigen.dim}")
        return cls(spec=spec, scheme=scheme, eigen=eigen, psi=v, masses=scheme.masses(spec), total_mass=total)

    @property
    def dim(self) -> int:
        return self.eigen.dim

    def node_vectors(self, t: float, select: Optional[np.ndarray] = None) -> np.ndarray:
        """列 q 为 e^{-itx_qB}|ψ⟩"""
        x = self.scheme.nodes if select is None else self.scheme.nodes[select]
        v = self.eigen.eigenvectors
        coeffs = v.conj().T @ self.psi
        phases = np.exp(-1j * t * np.outer(self.eigen.eigenvalues, x))
        return v @ (phases * coeffs[:, None])

    def weighted_matrix(self, t: float, select: Optional[np.ndarray] = None) -> Tuple[np.ndarray, float]:
        """Σ_q m_q |ψ_q⟩⟨ψ_q| 及其质量 Σ m_q"""
        phi = self.node_vectors(t, select)
        m = self.masses if select is None else self.masses[select]
        return (phi * m[None, :]) @ phi.conj().T, float(m.sum())

    def state(self, t: float, select: Optional[np.ndarray] = None) -> DensityOperator:
        matrix, mass = self.weighted_matrix(t, select)
        return DensityOperator.from_matrix(matrix / mass)


def uncountable_mixture(
    spec: DensitySpec,
    scheme: QuadratureScheme,
    b: Union[np.ndarray, HermEigen],
    psi,
    t: float,
) -> DensityOperator:
    """Σ_q w_q p(x_q) U(tx_q)|ψ⟩⟨ψ|U(tx_q)†，按求积质量归一"""
    return MixtureModel.create(spec, scheme, b, psi).state(t)


def natural_partition(spec: DensitySpec) -> List[Interval]:
    """每个支撑分量一个单元"""
    return spec.components()


def split_partition(spec: DensitySpec, n: int) -> List[Interval]:
    """把单分量支撑等分为 n 个单元"""
    if spec.count != 1:
        raise BadPartition("equal splitting is defined for single-component supports only")
    if n < 1:
        raise BadPartition(f"need at least one cell, got {n}")
    edges = np.linspace(spec.a, spec.b, n + 1)
    return [(float(lo), float(hi)) for lo, hi in zip(edges[:-1], edges[1:])]


def assign_cells(nodes: np.ndarray, cells: Sequence[Interval]) -> np.ndarray:
    """
    节点到单元的归属

    单元为半开区间 [lo, hi)，右端最大的单元取闭区间；单元须两两不交，
    每个节点恰好属于一个单元。
    """
    if not cells:
        raise BadPartition("partition has no cells")
    for lo, hi in cells:
        if not lo < hi:
            raise BadPartition(f"cell [{lo}, {hi}] is empty")
    order = sorted(range(len(cells)), key=lambda k: cells[k][0])
    for prev, nxt in zip(order[:-1], order[1:]):
        if cells[prev][1] > cells[nxt][0]:
            raise BadPartition(f"cells {cells[prev]} and {cells[nxt]} overlap")

    last = max(range(len(cells)), key=lambda k: cells[k][1])
    owner = np.full(nodes.size, -1)
    for k, (lo, hi) in enumerate(cells):
        inside = (nodes >= lo) & ((nodes <= hi) if k == last else (nodes < hi))
        owner[inside] = k
    if np.any(owner < 0):
        raise BadPartition(f"{int(np.sum(owner < 0))} quadrature node(s) are not covered by the partition")
    return owner


@dataclass(frozen=True, eq=False)
class NMixture:
    """N-混合：单元、分支权重 p_i、分支态 ρ_{i,t} 与完整混合态 ρ_t"""

    t: float
    cells: Tuple[Interval, ...]
    weights: np.ndarray
    branch_states: Tuple[DensityOperator, ...]
    full_state: DensityOperator
    node_counts: Tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.cells)

    def ensemble(self) -> Ensemble:
        return Ensemble.from_pairs(zip(self.weights.tolist(), self.branch_states))

    def reconstruction(self) -> np.ndarray:
        return sum(p * s.matrix for p, s in zip(self.weights, self.branch_states))

    def reconstruction_error(self) -> float:
        """‖Σ p_i ρ_{i,t} − ρ_t‖₁"""
        return trace_norm(self.reconstruction() - self.full_state.matrix)


def build_n_mixture(model: MixtureModel, cells: Sequence[Interval], t: float) -> NMixture:
    owner = assign_cells(model.scheme.nodes, cells)
    phi = model.node_vectors(t)
    m = model.masses

    full = (phi * m[None, :]) @ phi.conj().T / model.total_mass
    weights, branches, counts = [], [], []
    for k in range(len(cells)):
        sel = owner == k
        mass = float(m[sel].sum())
        if mass <= 0.0:
            raise BadPartition(f"cell {cells[k]} carries no probability mass")
        block = phi[:, sel]
        branches.append(DensityOperator.from_matrix((block * m[sel][None, :]) @ block.conj().T / mass))
        weights.append(mass / model.total_mass)
        counts.append(int(sel.sum()))

    return NMixture(
        t=float(t),
        cells=tuple((float(lo), float(hi)) for lo, hi in cells),
        weights=np.array(weights),
        branch_states=tuple(branches),
        full_state=DensityOperator.from_matrix(full),
        node_counts=tuple(counts),
    )


def n_mixture(
    spec: DensitySpec,
    scheme: QuadratureScheme,
    partition: Sequence[Interval],
    b: Union[np.ndarray, HermEigen],
    psi,
    t: float,
) -> NMixture:
    """
    按支撑划分改写求积混合

    p_i 为单元内节点质量之和（按总质量归一），分支态使用单元内重新归一的节点权重；
    与完整混合使用同一组节点，因此 Σ p_i ρ_{i,t} 与 ρ_t 只差舍入误差。
    """
    return build_n_mixture(MixtureModel.create(spec, scheme, b, psi), partition, t)


def uqsd_pipeline(nmix: NMixture, *, with_pgm: bool = True) -> BoundsReport:
    """由 N-混合构成系综 {p_i, ρ_{i,t}} 并计算判别界"""
    if nmix.size < 2:
        raise ValidationError(f"discrimination needs at least two branches, got {nmix.size}")
    return compute_bounds(nmix.ensemble(), with_pgm=with_pgm)
