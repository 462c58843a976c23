#!/usr/bin/env python3
"""
量子态值类型
密度算子、系综、POVM，以及混合与测量作用
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import DimensionMismatch, InvalidPovm, InvalidState, NotNormalized, ValidationError
from ..core.operators import as_matrix, clip_psd, hermiticity_error, herm_fn
from ..core.tolerances import HERM_TOL, POVM_TOL, PSD_CLIP_REL, TRACE_TOL

logger = logging.getLogger(__name__)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


def normalized_vector(vec, trace_tol: float = TRACE_TOL) -> np.ndarray:
    """检查并返回单位复向量"""
    v = np.asarray(vec, dtype=complex).reshape(-1)
    if v.size == 0 or not np.all(np.isfinite(v)):
        raise InvalidState("state vector must be a non-empty finite vector")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > trace_tol:
        raise NotNormalized(f"vector norm {norm:.12f} differs from 1 by more than {trace_tol:.1e}")
    return v


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """密度算子：Hermite、半正定、单位迹；纯态时额外保存态矢量"""

    matrix: np.ndarray
    vector: Optional[np.ndarray] = None

    @classmethod
    def from_matrix(
        cls,
        matrix,
        *,
        herm_tol: float = HERM_TOL,
        trace_tol: float = TRACE_TOL,
        psd_clip_rel: float = PSD_CLIP_REL,
    ) -> "DensityOperator":
        """
        校验后构造密度算子

        Args:
            matrix: 复方阵

        Returns:
            DensityOperator（矩阵已对称化为精确 Hermite）
        """
        m = as_matrix(matrix, "density matrix")
        err = hermiticity_error(m)
        if err > herm_tol:
            raise InvalidState(f"density matrix is not Hermitian (max |ρ - ρ†| = {err:.3e})")
        m = 0.5 * (m + m.conj().T)
        tr = float(np.real(np.trace(m)))
        if abs(tr - 1.0) > trace_tol:
            raise InvalidState(f"density matrix trace {tr:.12f} differs from 1 by more than {trace_tol:.1e}")
        try:
            clip_psd(np.linalg.eigvalsh(m), psd_clip_rel)
        except ValidationError as exc:
            raise InvalidState(f"density matrix is not positive semidefinite: {exc}") from exc
        return cls(matrix=_frozen(m))

    @classmethod
    def from_trusted(cls, matrix: np.ndarray) -> "DensityOperator":
        """调用方保证矩阵是密度矩阵（例如幺正共轭的结果），只做对称化"""
        m = np.asarray(matrix, dtype=complex)
        return cls(matrix=_frozen(0.5 * (m + m.conj().T)))

    @classmethod
    def pure(cls, vec, *, trace_tol: float = TRACE_TOL) -> "DensityOperator":
        """纯态 |ψ⟩⟨ψ|；外积天然半正定，无需特征值校验"""
        v = normalized_vector(vec, trace_tol)
        return cls(matrix=_frozen(np.outer(v, v.conj())), vector=_frozen(v))

    @classmethod
    def basis(cls, dim: int, index: int) -> "DensityOperator":
        vec = np.zeros(dim, dtype=complex)
        vec[index] = 1.0
        return cls.pure(vec)

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityOperator":
        return cls(matrix=_frozen(np.eye(dim, dtype=complex) / dim))

    @classmethod
    def diagonal(cls, probabilities: Sequence[float]) -> "DensityOperator":
        return cls.from_matrix(np.diag(np.asarray(probabilities, dtype=float)))

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def is_pure_vector(self) -> bool:
        return self.vector is not None

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def sqrt(self) -> np.ndarray:
        """√ρ；纯态时 √ρ = ρ"""
        if self.vector is not None:
            return np.asarray(self.matrix)
        return herm_fn(self.matrix, "sqrt")

    def evolve(self, unitary: np.ndarray) -> "DensityOperator":
        """U ρ U†"""
        if self.vector is not None:
            return DensityOperator.pure(unitary @ self.vector)
        return DensityOperator.from_trusted(unitary @ self.matrix @ unitary.conj().T)


@dataclass(frozen=True, eq=False)
class Ensemble:
    """系综 {p_i, ρ_i}：权重非负且和为 1，零权重成员在构造时丢弃"""

    members: Tuple[Tuple[float, DensityOperator], ...]

    @classmethod
    def from_pairs(
        cls,
        pairs: Iterable[Tuple[float, DensityOperator]],
        *,
        trace_tol: float = TRACE_TOL,
    ) -> "Ensemble":
        pairs = list(pairs)
        if not pairs:
            raise ValidationError("ensemble must have at least one member")
        weights = np.array([float(p) for p, _ in pairs])
        if not np.all(np.isfinite(weights)) or np.any(weights < 0.0):
            raise ValidationError(f"ensemble weights must be finite and non-negative: {weights.tolist()}")
        total = float(weights.sum())
        if abs(total - 1.0) > trace_tol:
            raise ValidationError(f"ensemble weights sum to {total:.12f}, not 1")
        dims = {state.dim for _, state in pairs}
        if len(dims) != 1:
            raise DimensionMismatch(f"ensemble members have different dimensions: {sorted(dims)}")
        kept = tuple((float(p), state) for p, state in pairs if p > 0.0)
        dropped = len(pairs) - len(kept)
        if dropped:
            logger.debug(f"Dropped {dropped} zero-weight ensemble member(s)")
        return cls(members=kept)

    @classmethod
    def uniform(cls, states: Sequence[DensityOperator]) -> "Ensemble":
        n = len(states)
        return cls.from_pairs([(1.0 / n, s) for s in states])

    @property
    def weights(self) -> List[float]:
        return [p for p, _ in self.members]

    @property
    def states(self) -> List[DensityOperator]:
        return [s for _, s in self.members]

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def dim(self) -> int:
        return self.members[0][1].dim

    def __len__(self) -> int:
        return self.size


@dataclass(frozen=True, eq=False)
class Povm:
    """测量算子 {M_l}，满足 Σ M_l†M_l = I（容差 povm_tol）"""

    operators: Tuple[np.ndarray, ...]
    completeness_error: float = field(default=0.0)

    @classmethod
    def from_operators(cls, operators: Iterable, *, povm_tol: float = POVM_TOL) -> "Povm":
        ops = [as_matrix(m, "measurement operator") for m in operators]
        if not ops:
            raise InvalidPovm("POVM must contain at least one operator")
        dims = {m.shape[0] for m in ops}
        if len(dims) != 1:
            raise DimensionMismatch(f"POVM operators have different dimensions: {sorted(dims)}")
        dim = ops[0].shape[0]
        total = sum(m.conj().T @ m for m in ops)
        err = float(np.max(np.abs(total - np.eye(dim))))
        if err > povm_tol:
            raise InvalidPovm(f"POVM is not complete: max |Σ M†M - I| = {err:.3e} > {povm_tol:.1e}")
        return cls(operators=tuple(_frozen(m) for m in ops), completeness_error=err)

    @classmethod
    def projective(cls, basis: np.ndarray, *, povm_tol: float = POVM_TOL) -> "Povm":
        """由正交归一基（列向量）构造投影测量"""
        b = np.asarray(basis, dtype=complex)
        return cls.from_operators([np.outer(b[:, k], b[:, k].conj()) for k in range(b.shape[1])],
                                  povm_tol=povm_tol)

    @classmethod
    def from_effects(cls, effects: Iterable, *, povm_tol: float = POVM_TOL) -> "Povm":
        """由效应算子 E_l 构造 M_l = √E_l"""
        return cls.from_operators([herm_fn(e, "sqrt") for e in effects], povm_tol=povm_tol)

    @property
    def dim(self) -> int:
        return int(self.operators[0].shape[0])

    @property
    def size(self) -> int:
        return len(self.operators)

    def effects(self) -> List[np.ndarray]:
        return [m.conj().T @ m for m in self.operators]

    def __len__(self) -> int:
        return self.size


def mix(ensemble: Ensemble) -> DensityOperator:
    """Σ p_i ρ_i"""
    dim = ensemble.dim
    total = np.zeros((dim, dim), dtype=complex)
    for p, state in ensemble.members:
        if state.dim != dim:
            raise DimensionMismatch(f"member dimension {state.dim} differs from {dim}")
        total += p * state.matrix
    if ensemble.size == 1:
        return ensemble.members[0][1]
    return DensityOperator.from_matrix(total)


def outcome_probability(rho: DensityOperator, operator: np.ndarray) -> float:
    """Tr{M ρ M†}"""
    if rho.vector is not None:
        mv = operator @ rho.vector
        return float(np.real(np.vdot(mv, mv)))
    return float(np.real(np.trace(operator @ rho.matrix @ operator.conj().T)))


def apply_measurement(rho: DensityOperator, povm: Povm, *, trace_tol: float = TRACE_TOL) -> DensityOperator:
    """测量后的非选择态 Σ M_i ρ M_i†"""
    if not isinstance(povm, Povm):
        raise InvalidPovm("apply_measurement expects a validated Povm")
    if povm.dim != rho.dim:
        raise DimensionMismatch(f"POVM dimension {povm.dim} differs from state dimension {rho.dim}")
    out = sum(m @ rho.matrix @ m.conj().T for m in povm.operators)
    # 迹偏差不超过 POVM 完备性误差
    tol = max(trace_tol, rho.dim * povm.completeness_error)
    return DensityOperator.from_matrix(out, trace_tol=tol)
