#!/usr/bin/env python3
"""
错误概率与判别界
给定 POVM 的错误概率、二元 Hellström 精确解、Qiu/Montanaro 下界、
Knill-Barnum 上界与 pretty-good measurement
"""

import itertools
import logging
from dataclasses import asdict, dataclass
from typing import List, Optional

import numpy as np

from ..core.exceptions import ConsistencyError, DegenerateMixture, DimensionMismatch, InvalidPovm, ValidationError
from ..core.operators import herm_eig
from ..core.tolerances import CHECK_TOL, PINV_CUTOFF_REL, TRACE_TOL
from ..states.density import DensityOperator, Ensemble, Povm, outcome_probability
from ..states.fidelity import root_fidelity

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ErrorBreakdown:
    """错误概率的两种写法及混淆矩阵 Tr{M_l ρ_i M_l†}"""

    error: float
    cross_term: float
    confusion: List[List[float]]

    def to_dict(self) -> dict:
        return asdict(self)


def error_probability(ensemble: Ensemble, povm: Povm, *, tol: float = CHECK_TOL) -> ErrorBreakdown:
    """
    p_E = 1 − Σ p_i Tr{M_i ρ_i M_i†}

    同时计算误判项之和 Σ_i p_i Σ_{l≠i} Tr{M_l ρ_i M_l†}（多余的测量结果只计入错误），
    两者在 tol + dim·(POVM 完备性误差) 内必须一致。

    Args:
        ensemble: N 元系综
        povm: K ≥ N 个测量算子

    Returns:
        ErrorBreakdown
    """
    if povm.dim != ensemble.dim:
        raise DimensionMismatch(f"POVM dimension {povm.dim} differs from ensemble dimension {ensemble.dim}")
    n, k = ensemble.size, povm.size
    if k < n:
        raise InvalidPovm(f"POVM has {k} outcome(s) but the ensemble has {n} member(s)")

    confusion = [[outcome_probability(state, m) for m in povm.operators] for state in ensemble.states]
    weights = ensemble.weights
    success = sum(p * confusion[i][i] for i, p in enumerate(weights))
    error = 1.0 - success
    cross = sum(p * sum(row[l] for l in range(k) if l != i) for i, (p, row) in enumerate(zip(weights, confusion)))

    allowed = tol + ensemble.dim * povm.completeness_error
    if abs(error - cross) > allowed:
        raise ConsistencyError(f"error probability {error:.15f} and cross-term sum {cross:.15f} disagree")
    return ErrorBreakdown(error=float(min(1.0, max(0.0, error))), cross_term=float(cross), confusion=confusion)


@dataclass(frozen=True, eq=False)
class HellstromResult:
    error: float
    povm: Povm


def hellstrom(
    p1: float,
    rho1: DensityOperator,
    p2: float,
    rho2: DensityOperator,
    *,
    trace_tol: float = TRACE_TOL,
    tol: float = CHECK_TOL,
) -> HellstromResult:
    """
    二元最小错误判别：p_E = ½ − ½‖p₁ρ₁ − p₂ρ₂‖₁

    最优测量为 p₁ρ₁ − p₂ρ₂ 非负/负特征子空间上的投影，零特征值归入结果 1。
    """
    if rho1.dim != rho2.dim:
        raise DimensionMismatch(f"states have different dimensions: {rho1.dim} vs {rho2.dim}")
    if abs(p1 + p2 - 1.0) > trace_tol or p1 < 0.0 or p2 < 0.0:
        raise ValidationError(f"prior probabilities must be non-negative and sum to 1, got ({p1}, {p2})")

    eig = herm_eig(p1 * rho1.matrix - p2 * rho2.matrix)
    lam, vecs = eig.eigenvalues, eig.eigenvectors
    error = 0.5 - 0.5 * float(np.sum(np.abs(lam)))

    positive = vecs[:, lam >= 0.0]
    negative = vecs[:, lam < 0.0]
    proj1 = positive @ positive.conj().T
    proj2 = negative @ negative.conj().T
    povm = Povm.from_operators([proj1, proj2])

    members = [(p1, rho1), (p2, rho2)]
    # 零权重成员会被系综丢弃，这里直接按定义计算
    direct = 1.0 - sum(p * outcome_probability(r, m) for (p, r), m in zip(members, povm.operators))
    if abs(direct - error) > tol:
        raise ConsistencyError(f"Hellström closed form {error:.15f} disagrees with its POVM ({direct:.15f})")
    return HellstromResult(error=float(max(0.0, error)), povm=povm)


def _require_pairs(ensemble: Ensemble) -> None:
    if ensemble.size < 2:
        raise ValidationError(f"bounds need at least two ensemble members, got {ensemble.size}")


def qiu_lower(ensemble: Ensemble) -> float:
    """½(1 − 1/(2(N−1)) Σ_{i≠j} ‖p_iρ_i − p_jρ_j‖₁)，下截断到 0"""
    _require_pairs(ensemble)
    n = ensemble.size
    members = ensemble.members
    total = 0.0
    for (pi, ri), (pj, rj) in itertools.combinations(members, 2):
        lam = np.linalg.eigvalsh(pi * ri.matrix - pj * rj.matrix)
        total += 2.0 * float(np.sum(np.abs(lam)))
    return max(0.0, 0.5 * (1.0 - total / (2.0 * (n - 1))))


def _pair_root_fidelities(ensemble: Ensemble) -> dict:
    states = ensemble.states
    return {(i, j): root_fidelity(states[i], states[j])
            for i, j in itertools.combinations(range(ensemble.size), 2)}


def montanaro_lower(ensemble: Ensemble) -> float:
    """½ Σ_{i≠j} p_i p_j F(ρ_i, ρ_j)（有序对）"""
    _require_pairs(ensemble)
    w = ensemble.weights
    roots = _pair_root_fidelities(ensemble)
    return 0.5 * sum(2.0 * w[i] * w[j] * r * r for (i, j), r in roots.items())


def knill_barnum_upper(ensemble: Ensemble) -> float:
    """Σ_{i≠j} √(p_i p_j) √F(ρ_i, ρ_j)（有序对，不截断到 1）"""
    _require_pairs(ensemble)
    w = ensemble.weights
    roots = _pair_root_fidelities(ensemble)
    return sum(2.0 * np.sqrt(w[i] * w[j]) * r for (i, j), r in roots.items())


def pgm(ensemble: Ensemble, *, pinv_cutoff_rel: float = PINV_CUTOFF_REL) -> Povm:
    """
    Pretty-good（平方根）测量

    效应 E_i = S^{-1/2} p_iρ_i S^{-1/2}，S = Σ p_jρ_j，伪逆只作用在 S 的支撑上；
    测量算子取 M_i = √(p_iρ_i)·S^{-1/2}，使 M_i†M_i = E_i。
    S 支撑的正交补由额外的“失败”投影补齐。
    """
    _require_pairs(ensemble)
    dim = ensemble.dim
    s = sum(p * r.matrix for p, r in ensemble.members)
    eig = herm_eig(0.5 * (s + s.conj().T))
    lam = eig.eigenvalues
    top = float(np.max(lam))
    if top <= 0.0:
        raise DegenerateMixture("average state has numerical rank 0")
    support = lam > pinv_cutoff_rel * top
    inv_sqrt = np.where(support, 1.0 / np.sqrt(np.where(support, lam, 1.0)), 0.0)
    s_inv_sqrt = eig.apply(inv_sqrt)

    operators = [np.sqrt(p) * r.sqrt() @ s_inv_sqrt for p, r in ensemble.members]

    # 小特征值会放大舍入误差；Σ M_i†M_i 的特征值只在 0 与 1 附近，用它把测量重新补全
    gram = herm_eig(sum(m.conj().T @ m for m in operators))
    kept = gram.eigenvalues > 0.5
    fix = gram.apply(np.where(kept, 1.0 / np.sqrt(np.where(kept, gram.eigenvalues, 1.0)), 0.0))
    operators = [m @ fix for m in operators]
    rank = int(np.count_nonzero(kept))
    if rank < dim:
        null = gram.eigenvectors[:, ~kept]
        operators.append(null @ null.conj().T)
        logger.debug(f"PGM: average state has rank {rank} < {dim}, added failure outcome")
    return Povm.from_operators(operators)


@dataclass(frozen=True)
class BoundsReport:
    """最小错误概率的上下界；N = 2 时附带 Hellström 精确值"""

    n: int
    dim: int
    qiu_lower: float
    montanaro_lower: float
    kb_upper: float
    pgm_error: Optional[float]
    hellstrom_exact: Optional[float]
    bracket_width: float

    def to_dict(self) -> dict:
        return asdict(self)


def compute_bounds(ensemble: Ensemble, *, with_pgm: bool = True, tol: float = CHECK_TOL) -> BoundsReport:
    """
    计算全部界并检查它们的次序

    Returns:
        BoundsReport；次序被破坏时抛出 ConsistencyError
    """
    qiu = qiu_lower(ensemble)
    mont = montanaro_lower(ensemble)
    kb = knill_barnum_upper(ensemble)
    pgm_error = error_probability(ensemble, pgm(ensemble)).error if with_pgm else None
    exact = None
    if ensemble.size == 2:
        (p1, r1), (p2, r2) = ensemble.members
        exact = hellstrom(p1, r1, p2, r2).error

    if mont > kb + tol:
        raise ConsistencyError(f"Montanaro bound {mont:.12f} exceeds Knill-Barnum bound {kb:.12f}")
    if pgm_error is not None:
        if max(qiu, mont) > pgm_error + tol or pgm_error > kb + tol:
            raise ConsistencyError(
                f"bound ordering violated: qiu={qiu:.12f} montanaro={mont:.12f} pgm={pgm_error:.12f} kb={kb:.12f}"
            )
    if exact is not None:
        upper = pgm_error if pgm_error is not None else kb
        if qiu > exact + tol or exact > upper + tol:
            raise ConsistencyError(f"Hellström error {exact:.12f} outside [{qiu:.12f}, {upper:.12f}]")

    upper = min(kb, pgm_error) if pgm_error is not None else kb
    return BoundsReport(
        n=ensemble.size,
        dim=ensemble.dim,
        qiu_lower=qiu,
        montanaro_lower=mont,
        kb_upper=kb,
        pgm_error=pgm_error,
        hellstrom_exact=exact,
        bracket_width=upper - max(qiu, mont),
    )
