#!/usr/bin/env python3
"""
有限秩截断
在特征基中保留 d 个最大特征值，研究保真度与 Knill-Barnum 界随 d 的收敛
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..core.exceptions import ConsistencyError, RankOutOfRange, ValidationError
from ..core.operators import clip_psd, trace_norm
from ..core.tolerances import CHECK_TOL
from ..discrimination.bounds import knill_barnum_upper
from ..states.density import DensityOperator, Ensemble
from ..states.fidelity import root_fidelity
from ..utils.parallel import parallel_map

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["d", "tail", "alpha", "fidelity_dev", "kb_dev", "bound", "sqrt_tail", "displacement"]


@dataclass(frozen=True, eq=False)
class Truncation:
    """秩 d 近似 ρ_d（未归一）及尾部质量"""

    rank: int
    matrix: np.ndarray
    sqrt_matrix: np.ndarray
    tail: float
    alpha: float
    sqrt_tail: float

    def normalized(self) -> DensityOperator:
        """α_d^{-1} ρ_d"""
        return DensityOperator.from_trusted(self.matrix / self.alpha)


def truncate(rho: DensityOperator, d: int) -> Truncation:
    """
    保留 d 个最大特征值及其特征向量

    相等特征值按原下标稳定排序，tail = Σ_{k>d} λ_k，α = Tr{ρ_d}。
    """
    if not 1 <= d <= rho.dim:
        raise RankOutOfRange(f"rank must lie in [1, {rho.dim}], got {d}")
    lam, vecs = np.linalg.eigh(rho.matrix)
    lam = clip_psd(lam)
    order = np.argsort(-lam, kind="stable")
    kept, dropped = order[:d], order[d:]
    v = vecs[:, kept]
    return Truncation(
        rank=d,
        matrix=(v * lam[kept]) @ v.conj().T,
        sqrt_matrix=(v * np.sqrt(lam[kept])) @ v.conj().T,
        tail=float(lam[dropped].sum()),
        alpha=float(lam[kept].sum()),
        sqrt_tail=float(np.sqrt(lam[dropped]).sum()),
    )


def geometric_state(dim: int, ratio: float, basis: Optional[np.ndarray] = None) -> DensityOperator:
    """谱 λ_k ∝ ratio^k（k = 1..dim），basis 的列为特征向量，缺省为计算基"""
    if not 0.0 < ratio <= 1.0:
        raise ValidationError(f"spectral ratio must lie in (0, 1], got {ratio}")
    lam = ratio ** np.arange(1, dim + 1, dtype=float)
    lam /= lam.sum()
    if basis is None:
        return DensityOperator.from_matrix(np.diag(lam))
    b = np.asarray(basis, dtype=complex)
    return DensityOperator.from_matrix((b * lam) @ b.conj().T)


def _check_ranks(ranks: Sequence[int], dim: int) -> List[int]:
    ranks = [int(d) for d in ranks]
    if not ranks:
        raise ValidationError("rank list is empty")
    if any(b <= a for a, b in zip(ranks[:-1], ranks[1:])):
        raise ValidationError(f"ranks must be strictly ascending: {ranks}")
    for d in ranks:
        if not 1 <= d <= dim:
            raise RankOutOfRange(f"rank must lie in [1, {dim}], got {d}")
    return ranks


@dataclass
class TruncationStudy:
    """按秩 d 排列的研究行"""

    kind: str
    ranks: List[int]
    rows: List[Dict[str, float]]
    reference: Dict[str, float] = field(default_factory=dict)

    def column(self, name: str) -> List[float]:
        return [row[name] for row in self.rows]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "ranks": self.ranks, "reference": self.reference, "rows": self.rows}


def fidelity_convergence_study(
    rho: DensityOperator,
    sigma: DensityOperator,
    ranks: Sequence[int],
    *,
    tol: float = CHECK_TOL,
    max_workers: Optional[int] = None,
) -> TruncationStudy:
    """
    截断保真度 ‖√ρ_d√σ_d‖₁ 的收敛

    每一行检查 |‖√ρ_d√σ_d‖₁ − ‖√ρ√σ‖₁| ≤ √tail_ρ + √tail_σ + tol，不成立时抛出 ConsistencyError。
    """
    ranks = _check_ranks(ranks, rho.dim)
    full = root_fidelity(rho, sigma)

    def row(d: int) -> Dict[str, float]:
        tr, ts = truncate(rho, d), truncate(sigma, d)
        value = trace_norm(tr.sqrt_matrix @ ts.sqrt_matrix)
        deviation = abs(value - full)
        bound = math.sqrt(tr.tail) + math.sqrt(ts.tail)
        if deviation > bound + tol:
            raise ConsistencyError(f"rank {d}: fidelity deviation {deviation:.3e} exceeds bound {bound:.3e}")
        return {
            "d": d,
            "tails": [tr.tail, ts.tail],
            "alphas": [tr.alpha, ts.alpha],
            "sqrt_tails": [tr.sqrt_tail, ts.sqrt_tail],
            "root_fidelity": value,
            "fidelity_dev": deviation,
            "bound": bound,
        }

    rows = parallel_map(row, ranks, max_workers, "fidelity truncation ranks")
    logger.info(f"Fidelity truncation study: {len(rows)} rank(s), final deviation {rows[-1]['fidelity_dev']:.3e}")
    return TruncationStudy(kind="fidelity", ranks=ranks, rows=rows, reference={"root_fidelity": full})


def _raw_kb(weights: Sequence[float], truncs: Sequence[Truncation]) -> float:
    """Σ_{i≠j} √(p_ip_j) ‖√ρ_{i,d}√ρ_{j,d}‖₁（未归一截断）"""
    total = 0.0
    for i in range(len(truncs)):
        for j in range(i + 1, len(truncs)):
            total += 2.0 * math.sqrt(weights[i] * weights[j]) * trace_norm(
                truncs[i].sqrt_matrix @ truncs[j].sqrt_matrix
            )
    return total


def kb_convergence_study(
    ensemble: Ensemble,
    ranks: Sequence[int],
    *,
    tol: float = CHECK_TOL,
    max_workers: Optional[int] = None,
) -> TruncationStudy:
    """
    截断系综的 Knill-Barnum 界

    每行给出归一截断系综的 KB 界、未归一形式 kb_raw（≤ max α·KB）与
    最小错误概率的位移界 N·Σ p_i tail_i(d)；满秩时 KB 必须与原系综一致。
    """
    ranks = _check_ranks(ranks, ensemble.dim)
    if ensemble.size < 2:
        raise ValidationError("Knill-Barnum study needs at least two members")
    weights = ensemble.weights
    n = ensemble.size
    full = knill_barnum_upper(ensemble)

    def row(d: int) -> Dict[str, float]:
        truncs = [truncate(state, d) for state in ensemble.states]
        normalized = Ensemble.from_pairs(zip(weights, [t.normalized() for t in truncs]))
        kb = knill_barnum_upper(normalized)
        raw = _raw_kb(weights, truncs)
        alpha_max = max(t.alpha for t in truncs)
        if raw > alpha_max * kb + tol:
            raise ConsistencyError(f"rank {d}: raw KB {raw:.12f} exceeds alpha_max * KB = {alpha_max * kb:.12f}")
        return {
            "d": d,
            "tails": [t.tail for t in truncs],
            "alphas": [t.alpha for t in truncs],
            "sqrt_tails": [t.sqrt_tail for t in truncs],
            "kb": kb,
            "kb_raw": raw,
            "kb_chain": alpha_max * kb,
            "kb_dev": abs(kb - full),
            "displacement": n * float(np.dot(weights, [t.tail for t in truncs])),
        }

    rows = parallel_map(row, ranks, max_workers, "KB truncation ranks")
    if ranks[-1] == ensemble.dim and rows[-1]["kb_dev"] > tol:
        raise ConsistencyError(f"full-rank KB differs from the untruncated value by {rows[-1]['kb_dev']:.3e}")
    logger.info(f"KB truncation study: {len(rows)} rank(s), final displacement {rows[-1]['displacement']:.3e}")
    return TruncationStudy(kind="kb", ranks=ranks, rows=rows, reference={"kb": full})


def truncation_study(
    ensemble: Ensemble,
    ranks: Sequence[int],
    *,
    max_workers: Optional[int] = None,
) -> TruncationStudy:
    """
    合并两项研究：保真度取前两个成员，KB 取整个系综

    CSV 行的 tail/alpha/sqrt_tail 取各成员中最差者（最大尾部、最小 α）。
    """
    fid = fidelity_convergence_study(ensemble.states[0], ensemble.states[1], ranks, max_workers=max_workers)
    kb = kb_convergence_study(ensemble, ranks, max_workers=max_workers)
    rows = []
    for f, k in zip(fid.rows, kb.rows):
        rows.append({
            "d": f["d"],
            "tail": max(k["tails"]),
            "alpha": min(k["alphas"]),
            "fidelity_dev": f["fidelity_dev"],
            "kb_dev": k["kb_dev"],
            "bound": f["bound"],
            "sqrt_tail": max(k["sqrt_tails"]),
            "displacement": k["displacement"],
            "tails": k["tails"],
            "alphas": k["alphas"],
            "kb": k["kb"],
            "kb_raw": k["kb_raw"],
            "root_fidelity": f["root_fidelity"],
        })
    reference = {**fid.reference, **kb.reference}
    return TruncationStudy(kind="combined", ranks=fid.ranks, rows=rows, reference=reference)
