#!/usr/bin/env python3
"""
幺正相关混合（URM）的时间演化
成员 i 在时刻 t 为 e^{-itx_iB} ρ_i e^{itx_iB}；另含单比特反例与离散化的类连续谱模型
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import ConsistencyError, DimensionMismatch, ValidationError
from ..core.operators import HermEigen, herm_eig
from ..core.tolerances import PSD_CLIP_REL
from ..discrimination.bounds import hellstrom
from ..states.density import DensityOperator, Ensemble

logger = logging.getLogger(__name__)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

PROFILES = ("uniform", "raised-cosine")


@dataclass(frozen=True, eq=False)
class UnitaryFamily:
    """生成元 B 与互不相同的速率 {x_i}：U_i(t) = e^{-itx_iB}"""

    generator: np.ndarray
    rates: Tuple[float, ...]
    eigen: HermEigen

    @classmethod
    def create(cls, generator, rates: Sequence[float]) -> "UnitaryFamily":
        rates = tuple(float(x) for x in rates)
        if not rates:
            raise ValidationError("unitary family needs at least one rate")
        if len(set(rates)) != len(rates):
            raise ValidationError(f"rates must be pairwise distinct, got {list(rates)}")
        eigen = herm_eig(generator)
        return cls(generator=np.asarray(generator, dtype=complex), rates=rates, eigen=eigen)

    @property
    def dim(self) -> int:
        return self.eigen.dim

    def unitary(self, index: int, t: float) -> np.ndarray:
        return self.eigen.exp(t * self.rates[index])

    def evolve_state(self, state: DensityOperator, theta: float) -> DensityOperator:
        """e^{-iθB} ρ e^{iθB}"""
        if state.dim != self.dim:
            raise DimensionMismatch(f"state dimension {state.dim} differs from generator dimension {self.dim}")
        if state.vector is not None:
            return DensityOperator.pure(self.eigen.exp_vector(theta, state.vector))
        return DensityOperator.from_trusted(self.eigen.conjugate(theta, np.asarray(state.matrix)))


def evolve_ensemble(
    family: UnitaryFamily,
    base: Sequence[DensityOperator],
    weights: Sequence[float],
    t: float,
) -> Ensemble:
    """成员 i 为 (p_i, U_i(t) ρ_i U_i(t)†)"""
    if not len(base) == len(weights) == len(family.rates):
        raise DimensionMismatch(
            f"need one base state and one weight per rate: {len(base)} state(s), "
            f"{len(weights)} weight(s), {len(family.rates)} rate(s)"
        )
    members = [(p, family.evolve_state(state, t * x)) for p, state, x in zip(weights, base, family.rates)]
    return Ensemble.from_pairs(members)


def qubit_state(theta: float) -> np.ndarray:
    """e^{-iθσ_x}|z₁⟩⟨z₁|e^{iθσ_x} 的闭式：布居 cos²/sin²，相干项 ±i cos·sin"""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c * c, 1j * c * s], [-1j * c * s, s * s]], dtype=complex)


@dataclass(frozen=True, eq=False)
class QubitExample:
    state1: DensityOperator
    state2: DensityOperator
    error: float
    closed_form_error: float


def qubit_example(t: float, x1: float, x2: float, *, tol: float = 1e-10) -> QubitExample:
    """
    单比特反例：B = σ_x，ρ = |z₁⟩⟨z₁|，等先验

    由闭式构造两个演化态，求 Hellström 误差；与通用演化路径交叉校验，
    并用 ‖ρ₁ − ρ₂‖₁ = 2√(−det(ρ₁ − ρ₂)) 给出闭式误差。
    """
    if x1 == x2:
        raise ValidationError("rates must differ")
    m1, m2 = qubit_state(t * x1), qubit_state(t * x2)

    family = UnitaryFamily.create(SIGMA_X, (x1, x2))
    z1 = DensityOperator.basis(2, 0)
    evolved = evolve_ensemble(family, [z1, z1], [0.5, 0.5], t)
    for closed, generic in zip((m1, m2), evolved.states):
        deviation = float(np.max(np.abs(closed - generic.matrix)))
        if deviation > tol:
            raise ConsistencyError(f"closed-form qubit state deviates from evolution by {deviation:.3e}")

    rho1 = DensityOperator.from_trusted(m1)
    rho2 = DensityOperator.from_trusted(m2)
    error = hellstrom(0.5, rho1, 0.5, rho2).error
    det = float(np.real(np.linalg.det(m1 - m2)))
    closed_error = 0.5 - 0.5 * math.sqrt(max(0.0, -det))
    return QubitExample(state1=rho1, state2=rho2, error=error, closed_form_error=closed_error)


def qubit_period(x1: float, x2: float) -> float:
    return math.pi / abs(x2 - x1)


@dataclass(frozen=True, eq=False)
class AcModel:
    """对角生成元 + 参考矢量；有限维只有点谱，类连续谱行为只在复现时间之前成立"""

    generator: np.ndarray
    psi: np.ndarray
    eigenvalues: np.ndarray
    weights: np.ndarray
    recurrence_time: float
    profile: str
    tag: str = "ac-emulating"
    metadata: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.size)

    def eigenvector_psi(self, index: Optional[int] = None) -> np.ndarray:
        """点谱对照：取 B 的一个本征矢（默认中间下标）"""
        k = self.dim // 2 if index is None else index
        vec = np.zeros(self.dim, dtype=complex)
        vec[k] = 1.0
        return vec


def profile_weights(d: int, profile: str) -> np.ndarray:
    """均匀或升余弦（Hann）权重，严格为正且归一"""
    if profile == "uniform":
        return np.full(d, 1.0 / d)
    if profile == "raised-cosine":
        k = np.arange(1, d + 1)
        w = 1.0 - np.cos(2.0 * np.pi * k / (d + 1))
        return w / w.sum()
    raise ValidationError(f"unknown weight profile '{profile}', expected one of {PROFILES}")


def discretized_ac_model(d: int, interval: Sequence[float], profile: str = "uniform") -> AcModel:
    """
    离散化的类绝对连续谱模型

    Args:
        d: 维数（≥ 2）
        interval: 谱区间 [a, b]
        profile: "uniform" 或 "raised-cosine"

    Returns:
        AcModel，复现时间 T_rec = 2π(d−1)/(b−a)
    """
    a, b = float(interval[0]), float(interval[1])
    if d < 2:
        raise ValidationError(f"model dimension must be at least 2, got {d}")
    if not a < b:
        raise ValidationError(f"spectral interval must satisfy a < b, got [{a}, {b}]")
    lam = np.linspace(a, b, d)
    w = profile_weights(d, profile)
    psi = np.sqrt(w).astype(complex)
    t_rec = 2.0 * np.pi * (d - 1) / (b - a)
    logger.debug(f"AC model: d={d}, interval=[{a}, {b}], profile={profile}, T_rec={t_rec:.3f}")
    return AcModel(
        generator=np.diag(lam).astype(complex),
        psi=psi,
        eigenvalues=lam,
        weights=w,
        recurrence_time=t_rec,
        profile=profile,
        metadata={"d": d, "interval": [a, b], "profile": profile, "recurrence_time": t_rec},
    )


@dataclass(frozen=True, eq=False)
class ComponentDecomposition:
    """ρ_i = Σ_k η_ik |φ_ik⟩⟨φ_ik| 的有限分解（取谱分解）"""

    sqrt_weights: Tuple[np.ndarray, ...]
    vectors: Tuple[np.ndarray, ...]

    @classmethod
    def of(cls, states: Sequence[DensityOperator]) -> "ComponentDecomposition":
        roots, vecs = [], []
        for state in states:
            if state.vector is not None:
                roots.append(np.ones(1))
                vecs.append(np.asarray(state.vector).reshape(-1, 1))
                continue
            lam, v = np.linalg.eigh(state.matrix)
            keep = lam > PSD_CLIP_REL * float(np.max(np.abs(lam)))
            roots.append(np.sqrt(lam[keep]))
            vecs.append(v[:, keep])
        return cls(sqrt_weights=tuple(roots), vectors=tuple(vecs))

    def sqrt_sums(self) -> List[float]:
        """每个分支的 Σ_k √η_ik"""
        return [float(r.sum()) for r in self.sqrt_weights]


def component_kb_bound(
    family: UnitaryFamily,
    components: ComponentDecomposition,
    weights: Sequence[float],
    t: float,
) -> float:
    """
    分量形式的 Knill-Barnum 上界

    Σ_{i≠j} √(p_ip_j) Σ_{k,k′} √(η_ik η_jk′) |⟨φ_ik|e^{-it(x_j−x_i)B}|φ_jk′⟩|，
    由保真度的强凹性，它不小于演化系综的 Knill-Barnum 界。
    """
    v = family.eigen.eigenvectors
    evolved = []
    for x, vecs in zip(family.rates, components.vectors):
        phases = family.eigen.phases(t * x)
        evolved.append(v @ (phases[:, None] * (v.conj().T @ vecs)))

    n = len(evolved)
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            amps = np.abs(evolved[i].conj().T @ evolved[j])
            inner = float(components.sqrt_weights[i] @ amps @ components.sqrt_weights[j])
            total += 2.0 * math.sqrt(weights[i] * weights[j]) * inner
    return total
