#!/usr/bin/env python3
"""
概率密度与求积
支撑为有限个紧区间；每个（子）区间上独立放置 Gauss-Legendre 节点
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from ..core.exceptions import SchemeMismatch, ValidationError
from ..core.tolerances import QUAD_TOL

logger = logging.getLogger(__name__)

DENSITY_KINDS = ("uniform", "raised-cosine", "two-uniform", "multi-uniform")

Interval = Tuple[float, float]


@dataclass(frozen=True)
class DensitySpec:
    """
    概率密度 p(x)

    - uniform: [a, b] 上均匀
    - raised-cosine: [a, b] 上 (1 − cos(2π(x−a)/(b−a)))/(b−a)
    - two-uniform / multi-uniform: count 个等宽区间 [a + kc, b + kc] 上的等权均匀混合
    """

    kind: str
    a: float = 0.0
    b: float = 1.0
    separation: Optional[float] = None
    count: int = 1

    def __post_init__(self):
        if self.kind not in DENSITY_KINDS:
            raise ValidationError(f"unknown density kind '{self.kind}', expected one of {DENSITY_KINDS}")
        if not self.a < self.b:
            raise ValidationError(f"density support must satisfy a < b, got [{self.a}, {self.b}]")
        if self.kind == "two-uniform":
            object.__setattr__(self, "count", 2)
        if self.kind in ("two-uniform", "multi-uniform"):
            if self.count < 2:
                raise ValidationError(f"{self.kind} needs at least two components, got {self.count}")
            if self.separation is None or self.separation <= self.width:
                raise ValidationError(
                    f"separation must exceed the component width {self.width}, got {self.separation}"
                )
        elif self.count != 1:
            raise ValidationError(f"{self.kind} has a single support component")

    @property
    def width(self) -> float:
        return self.b - self.a

    def components(self) -> List[Interval]:
        if self.count == 1:
            return [(self.a, self.b)]
        c = float(self.separation)
        return [(self.a + k * c, self.b + k * c) for k in range(self.count)]

    def gap(self) -> float:
        """相邻支撑分量之间的距离"""
        if self.count == 1:
            return 0.0
        return float(self.separation) - self.width

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        mask = np.zeros(x.shape, dtype=bool)
        for lo, hi in self.components():
            mask |= (x >= lo) & (x <= hi)
        return mask

    def pdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == "uniform":
            return np.where(self.contains(x), 1.0 / self.width, 0.0)
        if self.kind == "raised-cosine":
            shape = 1.0 - np.cos(2.0 * np.pi * (x - self.a) / self.width)
            return np.where(self.contains(x), shape / self.width, 0.0)
        return np.where(self.contains(x), 1.0 / (self.count * self.width), 0.0)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "a": self.a, "b": self.b}
        if self.count > 1:
            out.update({"separation": self.separation, "count": self.count})
        return out


def _split(interval: Interval, breakpoints: Sequence[float]) -> List[Interval]:
    lo, hi = interval
    cuts = sorted(x for x in set(breakpoints) if lo < x < hi)
    edges = [lo] + cuts + [hi]
    return list(zip(edges[:-1], edges[1:]))


@dataclass(frozen=True, eq=False)
class QuadratureScheme:
    """节点 x_q、积分权重 w_q（∫f ≈ Σ w_q f(x_q)）与节点所属区间"""

    nodes: np.ndarray
    weights: np.ndarray
    intervals: Tuple[Interval, ...]
    interval_index: np.ndarray
    nodes_per_interval: int

    @classmethod
    def gauss_legendre(
        cls,
        spec: DensitySpec,
        nodes: int = 128,
        breakpoints: Sequence[float] = (),
    ) -> "QuadratureScheme":
        """
        复合 Gauss-Legendre 求积

        Args:
            spec: 概率密度
            nodes: 每个（子）区间的节点数
            breakpoints: 在支撑分量内部再切分的位置，每个子区间独立放置节点
        """
        if nodes < 1:
            raise ValidationError(f"need at least one node per interval, got {nodes}")
        ref_x, ref_w = leggauss(nodes)
        intervals: List[Interval] = []
        for component in spec.components():
            intervals.extend(_split(component, breakpoints))

        xs, ws, idx = [], [], []
        for k, (lo, hi) in enumerate(intervals):
            half = 0.5 * (hi - lo)
            xs.append(half * ref_x + 0.5 * (hi + lo))
            ws.append(half * ref_w)
            idx.append(np.full(nodes, k))
        return cls(
            nodes=np.concatenate(xs),
            weights=np.concatenate(ws),
            intervals=tuple(intervals),
            interval_index=np.concatenate(idx),
            nodes_per_interval=nodes,
        )

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    def masses(self, spec: DensitySpec) -> np.ndarray:
        """w_q·p(x_q)"""
        return self.weights * spec.pdf(self.nodes)

    def check(self, spec: DensitySpec, quad_tol: float = QUAD_TOL) -> float:
        """节点须落在支撑内且总质量在 quad_tol 内为 1，返回总质量"""
        if not np.all(spec.contains(self.nodes)):
            raise SchemeMismatch("quadrature nodes fall outside the density support")
        covered = sum(hi - lo for lo, hi in self.intervals)
        support = sum(hi - lo for lo, hi in spec.components())
        if abs(covered - support) > 1e-12 * max(1.0, support):
            raise SchemeMismatch("quadrature intervals do not cover the density support")
        mass = float(np.sum(self.masses(spec)))
        if abs(mass - 1.0) > quad_tol:
            raise SchemeMismatch(f"density integrates to {mass:.12f} under this scheme")
        return mass


def resolving_nodes(
    spec: DensitySpec,
    spread: float,
    t_max: float,
    breakpoints: Sequence[float] = (),
) -> int:
    """
    在 |t| ≤ t_max 上分辨相位 e^{-itx(λ_k − λ_l)} 所需的每区间节点数

    区间半宽 h、谱宽 spread 时，n 点 Gauss-Legendre 的误差约为 (e·κ/4n)^{2n}，κ = t·spread·h。
    取 n ≥ 0.9κ + 16，比值不超过 0.76。
    """
    intervals = [piece for component in spec.components() for piece in _split(component, breakpoints)]
    half_width = 0.5 * max(hi - lo for lo, hi in intervals)
    kappa = abs(float(t_max)) * float(spread) * half_width
    return int(math.ceil(0.9 * kappa)) + 16
