#!/usr/bin/env python3
"""
时间扫描与可解性判据
在时间网格上计算界，并根据有限窗口上的证据给出 fully / not-fully / inconclusive 判定
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import ConsistencyError, UnsupportedCombination, ValidationError, WindowOutOfRange
from ..core.tolerances import CHECK_TOL
from ..discrimination.bounds import hellstrom, knill_barnum_upper, montanaro_lower, qiu_lower
from ..states.density import DensityOperator
from ..utils.parallel import parallel_map
from .evolution import ComponentDecomposition, UnitaryFamily, component_kb_bound, evolve_ensemble
from .spectral import SpectralProfile

logger = logging.getLogger(__name__)

QUANTITIES = ("kb", "montanaro", "hellstrom", "qiu", "kb-components", "autocorrelation")
UPPER_BOUNDS = frozenset({"kb", "kb-components", "hellstrom", "autocorrelation"})
LOWER_BOUNDS = frozenset({"montanaro", "qiu", "hellstrom", "autocorrelation"})

FULLY = "fully-solvable-evidence"
NOT_FULLY = "not-fully-solvable-evidence"
INCONCLUSIVE = "inconclusive"

CAVEAT = (
    "Evidence over a finite time window only: every finite-dimensional generator has pure point "
    "spectrum, so decay is emulated up to the recurrence time and no limit is claimed."
)

DEFAULT_WINDOW = (50.0, 500.0)


@dataclass(frozen=True)
class TimeGrid:
    """均匀时间网格"""

    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.points < 1:
            raise ValidationError("time grid must have at least one point")
        if self.points > 1 and not self.stop > self.start:
            raise ValidationError(f"time grid must be strictly increasing: [{self.start}, {self.stop}]")

    def times(self) -> np.ndarray:
        if self.points == 1:
            return np.array([float(self.start)])
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True, eq=False)
class SweepResult:
    """网格时间上的一个量；metadata 记录模型、速率等"""

    times: np.ndarray
    values: np.ndarray
    quantity: str
    metadata: Dict = field(default_factory=dict)

    def __post_init__(self):
        if self.times.size > 1 and np.any(np.diff(self.times) <= 0.0):
            raise ValidationError("sweep time grid must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValidationError(f"sweep of {self.quantity} produced non-finite values")

    def rows(self) -> List[Dict[str, float]]:
        return [{"t": float(t), "value": float(v)} for t, v in zip(self.times, self.values)]

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "metadata": self.metadata,
            "points": int(self.times.size),
            "max": float(np.max(self.values)),
            "min": float(np.min(self.values)),
        }


def _pure_single_state(base: Sequence[DensityOperator]) -> Optional[np.ndarray]:
    """所有分支是同一个纯态时返回该态矢量"""
    first = base[0].vector
    if first is None:
        return None
    for state in base[1:]:
        if state.vector is None or not np.allclose(state.vector, first, atol=1e-14):
            return None
    return np.asarray(first)


def direct_kb(profile: SpectralProfile, rates: Sequence[float], weights: Sequence[float], t) -> np.ndarray:
    """纯态 URM 的 Knill-Barnum 界：Σ_{i≠j} √(p_ip_j) |a((x_j − x_i)t)|"""
    times = np.atleast_1d(np.asarray(t, dtype=float))
    total = np.zeros(times.size)
    n = len(rates)
    for i in range(n):
        for j in range(i + 1, n):
            amp = np.abs(profile.autocorrelation((rates[j] - rates[i]) * times))
            total += 2.0 * math.sqrt(weights[i] * weights[j]) * amp
    return total


def bound_sweep(
    family: UnitaryFamily,
    base: Sequence[DensityOperator],
    weights: Sequence[float],
    grid: TimeGrid,
    which: str,
    *,
    max_workers: Optional[int] = None,
    metadata: Optional[Dict] = None,
    tol: float = CHECK_TOL,
) -> SweepResult:
    """
    在时间网格上计算指定的量

    Args:
        family: 生成元与速率
        base: 每个分支的初态
        weights: 先验概率
        grid: 时间网格
        which: kb / montanaro / hellstrom / qiu / kb-components
        max_workers: 线程数，None 为自动

    Returns:
        SweepResult；纯态单态 URM 的 kb 值与自相关直接公式交叉校验
    """
    if which not in QUANTITIES or which == "autocorrelation":
        raise ValidationError(f"unknown sweep quantity '{which}'")
    if which == "hellstrom" and len(base) != 2:
        raise UnsupportedCombination(f"hellstrom sweep needs exactly two branches, got {len(base)}")
    if len(base) < 2:
        raise ValidationError("a sweep needs at least two branches")

    times = grid.times()
    components = ComponentDecomposition.of(base) if which == "kb-components" else None

    def evaluate(t: float) -> float:
        if which == "kb-components":
            return component_kb_bound(family, components, weights, t)
        ensemble = evolve_ensemble(family, base, weights, t)
        if which == "kb":
            return knill_barnum_upper(ensemble)
        if which == "montanaro":
            return montanaro_lower(ensemble)
        if which == "qiu":
            return qiu_lower(ensemble)
        (p1, r1), (p2, r2) = ensemble.members
        return hellstrom(p1, r1, p2, r2).error

    logger.info(f"Sweeping {which} over {times.size} time point(s) in [{grid.start}, {grid.stop}]")
    values = np.array(parallel_map(evaluate, list(times), max_workers=max_workers, label=f"{which} sweep"))

    meta = dict(metadata or {})
    meta.update({"rates": list(family.rates), "weights": [float(p) for p in weights], "which": which})
    if components is not None:
        meta["sqrt_weight_sums"] = components.sqrt_sums()

    psi = _pure_single_state(base)
    if which == "kb" and psi is not None:
        profile = SpectralProfile.from_generator(family.eigen, psi)
        direct = direct_kb(profile, family.rates, weights, times)
        deviation = float(np.max(np.abs(direct - values)))
        if deviation > tol:
            raise ConsistencyError(f"KB sweep deviates from the autocorrelation formula by {deviation:.3e}")
        meta["direct_formula_deviation"] = deviation

    return SweepResult(times=times, values=values, quantity=which, metadata=meta)


def autocorrelation_sweep(profile: SpectralProfile, grid: TimeGrid, metadata: Optional[Dict] = None) -> SweepResult:
    """|a(t)| 在网格上的取值"""
    times = grid.times()
    values = np.abs(profile.autocorrelation(times))
    return SweepResult(times=times, values=values, quantity="autocorrelation", metadata=dict(metadata or {}))


@dataclass(frozen=True)
class Verdict:
    """可解性判定；rule 记录触发的规则"""

    kind: str
    rule: Optional[str]
    threshold: float
    window: Tuple[float, float]
    statistics: Dict
    caveat: str = CAVEAT

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "rule": self.rule,
            "threshold": self.threshold,
            "window": list(self.window),
            "statistics": self.statistics,
            "caveat": self.caveat,
        }


def default_window(sweep: SweepResult) -> Tuple[float, float]:
    """
    缺省判定窗口

    有复现时间时取 [50, min(500, T_rec/2)]；T_rec/2 不超过 50 的小模型改取 [起点, T_rec/2]。
    结果裁剪到网格范围内，裁剪后为空则取整个网格。
    """
    t0, t1 = float(sweep.times[0]), float(sweep.times[-1])
    t_rec = sweep.metadata.get("recurrence_time")
    if t_rec is None:
        return t0, t1
    half = 0.5 * float(t_rec)
    lo, hi = DEFAULT_WINDOW[0], min(DEFAULT_WINDOW[1], half)
    if hi <= lo:
        lo, hi = t0, half
    lo, hi = max(lo, t0), min(hi, t1)
    if hi <= lo:
        return t0, t1
    return lo, hi


def dominant_period(times: np.ndarray, values: np.ndarray) -> Optional[float]:
    """离散傅里叶变换的主频对应的周期；常数序列返回 None"""
    if times.size < 4:
        return None
    centered = values - np.mean(values)
    scale = max(1.0, float(np.max(np.abs(values))))
    if float(np.max(np.abs(centered))) <= 1e-12 * scale:
        return None
    spectrum = np.abs(np.fft.rfft(centered))
    freqs = np.fft.rfftfreq(times.size, d=float(times[1] - times[0]))
    k = int(np.argmax(spectrum[1:])) + 1
    return float(1.0 / freqs[k])


def solvability_verdict(
    sweep: SweepResult,
    decay_threshold: float = 0.1,
    window: Optional[Tuple[float, float]] = None,
    period: Optional[float] = None,
) -> Verdict:
    """
    有限窗口上的可解性证据

    - 上界类扫描在窗口内最大值 ≤ 阈值：fully-solvable-evidence
    - 下界类扫描在每个周期长度子窗口内的最大值都 ≥ 阈值（界在每个周期都回升）：
      not-fully-solvable-evidence
    - 其余：inconclusive

    周期优先取 period 参数，其次取 metadata["analytic_period"]，最后由离散傅里叶变换估计。
    """
    lo, hi = window if window is not None else default_window(sweep)
    t0, t1 = float(sweep.times[0]), float(sweep.times[-1])
    eps = 1e-9 * max(1.0, abs(t1))
    if not (t0 - eps <= lo < hi <= t1 + eps):
        raise WindowOutOfRange(f"window [{lo}, {hi}] is not inside the sweep span [{t0}, {t1}]")

    mask = (sweep.times >= lo - eps) & (sweep.times <= hi + eps)
    times, values = sweep.times[mask], sweep.values[mask]
    if times.size < 2:
        raise WindowOutOfRange(f"window [{lo}, {hi}] holds {times.size} grid point(s), need at least 2")
    stats: Dict = {"window_points": int(times.size), "window_max": float(np.max(values)),
                   "window_min": float(np.min(values))}

    if sweep.quantity in UPPER_BOUNDS and stats["window_max"] <= decay_threshold:
        return Verdict(kind=FULLY, rule="upper-bound-decay", threshold=decay_threshold,
                       window=(lo, hi), statistics=stats)

    if sweep.quantity in LOWER_BOUNDS:
        p = period or sweep.metadata.get("analytic_period") or dominant_period(times, values)
        span = hi - lo
        if p is None or p >= span:
            maxima = [float(np.max(values))]
        else:
            count = int(math.floor(span / p + 1e-9))
            maxima = []
            for k in range(count):
                sub = (times >= lo + k * p - eps) & (times <= lo + (k + 1) * p + eps)
                if np.any(sub):
                    maxima.append(float(np.max(values[sub])))
        stats.update({"period": p, "subwindows": len(maxima), "min_subwindow_max": min(maxima)})
        if min(maxima) >= decay_threshold:
            return Verdict(kind=NOT_FULLY, rule="lower-bound-recurrence", threshold=decay_threshold,
                           window=(lo, hi), statistics=stats)

    return Verdict(kind=INCONCLUSIVE, rule=None, threshold=decay_threshold, window=(lo, hi), statistics=stats)
