#!/usr/bin/env python3
"""
场景执行器
按场景类型分派到对应的研究，返回 CSV 行、JSON 结果与一行摘要所需的关键数值
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from ..config import Config
from ..core.exceptions import ConsistencyError, ValidationError, WindowOutOfRange
from ..core.tolerances import CHECK_TOL
from ..discrimination import chernoff, compute_bounds, error_probability, hellstrom, tensor_power_study
from ..dynamics import (
    AcModel,
    SpectralProfile,
    SweepResult,
    TimeGrid,
    UnitaryFamily,
    Verdict,
    autocorrelation_sweep,
    bound_sweep,
    discretized_ac_model,
    qubit_example,
    qubit_period,
    solvability_verdict,
    wiener_average,
)
from ..dynamics.evolution import SIGMA_X
from ..dynamics.sweeps import FULLY, NOT_FULLY
from ..states import DensityOperator, Ensemble, purification_fidelity_check, purity, root_fidelity
from ..states.sampling import random_ensemble, random_projective_povm, random_unitary
from ..states.serialization import ensemble_from_spec, ensemble_to_dict, povm_from_dict, povm_to_dict, vector_from_spec
from ..truncation import geometric_state, truncation_study
from ..truncation.studies import CSV_COLUMNS as TRUNCATION_COLUMNS
from ..uncountable import (
    DensitySpec,
    MixtureModel,
    QuadratureScheme,
    claim13_harness,
    fidelity_inequality_suite,
    natural_partition,
    resolving_nodes,
    split_partition,
    uqsd_pipeline,
)
from ..uncountable.nmixture import build_n_mixture
from ..utils.parallel import parallel_map
from .scenario import Scenario

logger = logging.getLogger(__name__)

DEFAULT_AC = {"d": 256, "interval": [0.0, 1.0], "profile": "uniform", "psi": "profile"}

NMIXTURE_COLUMNS = ["t", "reconstruction_error", "purity", "qiu_lower", "montanaro_lower", "pgm_error",
                    "kb_upper", "hellstrom_exact"]


@dataclass
class StudyOutput:
    """一次研究的产物"""

    columns: List[str]
    rows: List[Dict[str, Any]]
    result: Dict[str, Any]
    summary: Dict[str, Any]
    verdict: Optional[str] = None
    notes: List[str] = field(default_factory=list)


def build_ac_model(params: Optional[dict]) -> Tuple[AcModel, np.ndarray, str]:
    """由场景参数构造 AC 模型与参考矢量"""
    merged = {**DEFAULT_AC, **(params or {})}
    model = discretized_ac_model(int(merged["d"]), merged["interval"], merged["profile"])
    psi = model.psi if merged["psi"] == "profile" else model.eigenvector_psi()
    return model, psi, merged["psi"]


class ScenarioRunner:
    """场景执行器；config 提供默认网格、阈值与线程数"""

    def __init__(self, config: Config):
        self.config = config
        self._studies: Dict[str, Callable[[Scenario], StudyOutput]] = {
            "hellstrom": self._hellstrom,
            "bounds": self._bounds,
            "urm-sweep": self._urm_sweep,
            "chernoff": self._chernoff,
            "tensor-power": self._tensor_power,
            "nmixture": self._nmixture,
            "claim13": self._claim13,
            "truncation": self._truncation,
            "inequality-suite": self._inequality_suite,
        }

    @property
    def workers(self) -> Optional[int]:
        return self.config.workers

    def run(self, scenario: Scenario) -> StudyOutput:
        logger.info(f"Running {scenario.kind} scenario (seed {scenario.seed})")
        return self._studies[scenario.kind](scenario)

    # ------------------------------------------------------------------
    # 判别
    # ------------------------------------------------------------------

    def _hellstrom(self, scenario: Scenario) -> StudyOutput:
        ensemble = ensemble_from_spec(scenario.params["ensemble"])
        if ensemble.size != 2:
            raise ValidationError(f"hellstrom scenario needs two members with positive weight, got {ensemble.size}")
        (p1, r1), (p2, r2) = ensemble.members
        result = hellstrom(p1, r1, p2, r2)
        breakdown = error_probability(ensemble, result.povm)
        rng = np.random.default_rng(scenario.seed)
        purification = purification_fidelity_check(r1, r2, self.config.purification_trials, rng)

        rows = [
            {"member": i, "weight": p, "outcome_1": row[0], "outcome_2": row[1]}
            for i, (p, row) in enumerate(zip(ensemble.weights, breakdown.confusion))
        ]
        payload = {
            "error": result.error,
            "ensemble": ensemble_to_dict(ensemble),
            "povm": povm_to_dict(result.povm),
            "breakdown": breakdown.to_dict(),
            "root_fidelity": root_fidelity(r1, r2),
            "purification": purification.to_dict(),
        }
        summary = {"error": result.error, "fidelity": purification.fidelity}

        # 给定的测量与最优测量对照
        if "povm" in scenario.params:
            candidate = error_probability(ensemble, povm_from_dict(scenario.params["povm"]))
            excess = candidate.error - result.error
            if excess < -CHECK_TOL:
                raise ConsistencyError(f"a supplied measurement beats the Hellström error by {-excess:.3e}")
            payload["candidate"] = {"breakdown": candidate.to_dict(), "excess_error": excess}
            summary["candidate_error"] = candidate.error
        return StudyOutput(
            columns=["member", "weight", "outcome_1", "outcome_2"],
            rows=rows,
            result=payload,
            summary=summary,
        )


    def _bounds(self, scenario: Scenario) -> StudyOutput:
        columns = ["instance", "n", "dim", "qiu_lower", "montanaro_lower", "pgm_error", "kb_upper",
                   "hellstrom_exact", "bracket_width", "min_povm_error"]
        params = scenario.params
        if "ensemble" in params:
            report = compute_bounds(ensemble_from_spec(params["ensemble"]))
            row = {"instance": 0, **report.to_dict(), "min_povm_error": None}
            return StudyOutput(
                columns=columns,
                rows=[row],
                result={"bounds": report.to_dict()},
                summary={"qiu": report.qiu_lower, "montanaro": report.montanaro_lower,
                         "pgm": report.pgm_error, "kb": report.kb_upper},
            )

        random = params["random"]
        count = int(random["count"])
        dims = random.get("dims", [2, 6])
        sizes = random.get("sizes", [2, 4])
        povm_trials = int(random.get("povm_trials", 100))

        def instance(k: int) -> dict:
            rng = np.random.default_rng([scenario.seed, k])
            dim = int(rng.integers(dims[0], dims[1] + 1))
            size = int(rng.integers(sizes[0], sizes[1] + 1))
            ensemble = random_ensemble(size, dim, rng)
            report = compute_bounds(ensemble)
            row = {"instance": k, **report.to_dict(), "min_povm_error": None}
            if report.hellstrom_exact is not None:
                if abs(report.qiu_lower - report.hellstrom_exact) > 1e-10:
                    raise ConsistencyError(f"instance {k}: Qiu bound differs from the Hellström error")
                if povm_trials:
                    errors = [error_probability(ensemble, random_projective_povm(dim, rng)).error
                              for _ in range(povm_trials)]
                    row["min_povm_error"] = min(errors)
                    if report.hellstrom_exact > row["min_povm_error"] + 1e-9:
                        raise ConsistencyError(f"instance {k}: a random measurement beats the Hellström error")
            return row

        rows = parallel_map(instance, list(range(count)), self.workers, "random ensembles")
        widths = [r["bracket_width"] for r in rows]
        return StudyOutput(
            columns=columns,
            rows=rows,
            result={"instances": count, "max_bracket_width": max(widths), "mean_bracket_width": float(np.mean(widths))},
            summary={"instances": count, "max_bracket_width": max(widths)},
        )

    def _chernoff(self, scenario: Scenario) -> StudyOutput:
        ensemble = ensemble_from_spec(scenario.params["ensemble"])
        report = chernoff(ensemble, grid_points=self.config.chernoff_grid_points, max_workers=self.workers)
        payload = report.to_dict()
        return StudyOutput(
            columns=["i", "j", "exponent", "s_min", "q_min", "orthogonal_support"],
            rows=payload["pairs"],
            result=payload,
            summary={"exponent": payload["exponent"]},
        )

    def _tensor_power(self, scenario: Scenario) -> StudyOutput:
        params = scenario.params
        p = float(params["p"])
        study = tensor_power_study(
            p, vector_from_spec(params["psi1"]), 1.0 - p, vector_from_spec(params["psi2"]), int(params["n_max"]),
            explicit_n_cap=int(params.get("explicit_n_cap", self.config.explicit_n_cap)),
        )
        payload = study.to_dict()
        last = study.rows[-1]
        return StudyOutput(
            columns=["n", "error", "rate", "explicit_error"],
            rows=payload["rows"],
            result=payload,
            summary={"exponent": payload["exponent"], "n": last.n, "rate": last.rate},
            verdict="sandwich-holds" if study.sandwich_holds() else "sandwich-violated",
        )

    # ------------------------------------------------------------------
    # URM 动力学
    # ------------------------------------------------------------------

    def _urm_sweep(self, scenario: Scenario) -> StudyOutput:
        params = scenario.params
        grid_spec = params["grid"]
        grid = TimeGrid(float(grid_spec["start"]), float(grid_spec["stop"]),
                        int(grid_spec.get("points", self.config.default_grid_points)))

        if params["model"] == "qubit":
            generator = SIGMA_X
            psi = np.array([1.0, 0.0], dtype=complex)
            rates = params.get("rates", [0.0, 1.0])
            which = params.get("which", "hellstrom")
            metadata: Dict[str, Any] = {"model": "qubit"}
            if len(rates) == 2:
                metadata["analytic_period"] = qubit_period(rates[0], rates[1])
        else:
            model, psi, psi_kind = build_ac_model({k: params[k] for k in DEFAULT_AC if k in params})
            generator = model.generator
            rates = params.get("rates", [0.0, 1.0, 2.0])
            which = params.get("which", "kb")
            metadata = {"model": "ac", "psi": psi_kind, **model.metadata}

        weights = params.get("weights") or [1.0 / len(rates)] * len(rates)
        family = UnitaryFamily.create(generator, rates)
        profile = SpectralProfile.from_generator(family.eigen, psi)

        if which == "autocorrelation":
            sweep = autocorrelation_sweep(profile, grid, metadata)
        else:
            base = [DensityOperator.pure(psi)] * len(rates)
            sweep = bound_sweep(family, base, weights, grid, which, max_workers=self.workers, metadata=metadata)

        threshold = float(params.get("threshold", self.config.decay_threshold))
        window = tuple(params["window"]) if "window" in params else None
        verdict = solvability_verdict(sweep, threshold, window)

        rows = sweep.rows()
        columns = ["t", "value"]
        result: Dict[str, Any] = {"sweep": sweep.to_dict(), "verdict": verdict.to_dict()}

        if params["model"] == "qubit" and which == "hellstrom" and len(rates) == 2:
            closed = [qubit_example(row["t"], rates[0], rates[1]).closed_form_error for row in rows]
            for row, value in zip(rows, closed):
                row["closed_form"] = value
            columns.append("closed_form")
            result["max_closed_form_deviation"] = float(max(abs(r["value"] - r["closed_form"]) for r in rows))

        average = wiener_average(family.eigen, psi, grid.stop, self.config.wiener_samples) if grid.stop > 0 else None
        result["wiener"] = {"T": grid.stop, "average": average, "point_mass_sum": profile.point_mass_sum()}

        return StudyOutput(
            columns=columns,
            rows=rows,
            result=result,
            summary={"which": which, "max": float(np.max(sweep.values)), "min": float(np.min(sweep.values)),
                     "window_max": verdict.statistics["window_max"]},
            verdict=verdict.kind,
            notes=[verdict.caveat],
        )

    # ------------------------------------------------------------------
    # 不可数混合
    # ------------------------------------------------------------------

    def _nmixture(self, scenario: Scenario) -> StudyOutput:
        params = scenario.params
        model, psi, psi_kind = build_ac_model(params.get("model"))
        density = params["density"]
        spec = DensitySpec(
            kind=density["kind"],
            a=float(density.get("a", 0.0)),
            b=float(density.get("b", 1.0)),
            separation=density.get("separation"),
            count=int(density.get("count", 2 if density["kind"] in ("two-uniform", "multi-uniform") else 1)),
        )
        partition = params.get("partition", "natural")
        if partition == "natural":
            cells = natural_partition(spec)
        elif isinstance(partition, dict):
            cells = split_partition(spec, int(partition["split"]))
        else:
            cells = [(float(lo), float(hi)) for lo, hi in partition]

        # 每个单元独立放置节点
        breakpoints = sorted({x for cell in cells for x in cell})
        times = [float(t) for t in params["times"]]
        spread = float(model.eigenvalues.max() - model.eigenvalues.min())
        needed = resolving_nodes(spec, spread, max(abs(t) for t in times), breakpoints)
        if "nodes" in params:
            nodes = int(params["nodes"])
            if nodes < needed:
                logger.warning(f"{nodes} nodes per interval under-resolve t={max(times)}; {needed} recommended")
        else:
            nodes = max(self.config.quad_nodes, needed)
            if nodes > self.config.quad_nodes:
                logger.info(f"Raising quadrature to {nodes} nodes per interval for t up to {max(times)}")
        scheme = QuadratureScheme.gauss_legendre(spec, nodes, breakpoints)
        mixture = MixtureModel.create(spec, scheme, model.generator, psi)

        def at(t: float) -> dict:
            nmix = build_n_mixture(mixture, cells, float(t))
            row = {
                "t": float(t),
                "reconstruction_error": nmix.reconstruction_error(),
                "purity": purity(nmix.full_state),
                "qiu_lower": None, "montanaro_lower": None, "pgm_error": None, "kb_upper": None,
                "hellstrom_exact": None,
            }
            if nmix.size >= 2:
                report = uqsd_pipeline(nmix)
                row.update({k: v for k, v in report.to_dict().items() if k in row})
            row["branch_weights"] = nmix.weights.tolist()
            return row

        rows = parallel_map(at, times, self.workers, "n-mixture times")
        worst = max(r["reconstruction_error"] for r in rows)
        result = {
            "density": spec.to_dict(),
            "cells": [list(c) for c in cells],
            "nodes": scheme.size,
            "nodes_per_interval": nodes,
            "psi": psi_kind,
            "max_reconstruction_error": worst,
            "times": rows,
        }
        summary: Dict[str, Any] = {"cells": len(cells), "max_reconstruction_error": worst}

        verdict = self._nmixture_verdict(rows, model.metadata, params)
        if verdict is None:
            return StudyOutput(columns=NMIXTURE_COLUMNS, rows=rows, result=result, summary=summary)
        result["verdict"] = verdict.to_dict()
        summary["window_max"] = verdict.statistics["window_max"]
        return StudyOutput(
            columns=NMIXTURE_COLUMNS,
            rows=rows,
            result=result,
            summary=summary,
            verdict=verdict.kind,
            notes=[verdict.caveat],
        )

    def _nmixture_verdict(self, rows: List[dict], metadata: dict, params: dict) -> Optional[Verdict]:
        """
        N-混合界随时间的可解性证据

        KB 上界在窗口内衰减到阈值以下判 fully；否则看下界（两分支用 Hellström，多分支用 Montanaro）
        是否在窗口内处处不低于阈值。分支不足两个或缺省窗口内不足两个时间点时不判定。
        """
        by_time = {r["t"]: r for r in rows}
        if len(by_time) < 2 or any(r["kb_upper"] is None for r in rows):
            return None
        times = np.array(sorted(by_time))
        ordered = [by_time[t] for t in times]
        lower_key, lower_name = (
            ("hellstrom_exact", "hellstrom") if ordered[0]["hellstrom_exact"] is not None
            else ("montanaro_lower", "montanaro")
        )
        upper = SweepResult(times, np.array([r["kb_upper"] for r in ordered]), "kb", dict(metadata))
        lower = SweepResult(times, np.array([r[lower_key] for r in ordered]), lower_name, dict(metadata))

        threshold = float(params.get("threshold", self.config.decay_threshold))
        window = tuple(params["window"]) if "window" in params else None
        try:
            verdict = solvability_verdict(upper, threshold, window)
        except WindowOutOfRange:
            if window is not None:
                raise
            logger.info("Too few times inside the default window, skipping the solvability verdict")
            return None
        if verdict.kind == FULLY:
            return verdict
        # 时间点稀疏，逐点检查下界
        spacing = float(np.min(np.diff(times)))
        recurrence = solvability_verdict(lower, threshold, verdict.window, period=spacing)
        return recurrence if recurrence.kind == NOT_FULLY else verdict

    def _claim13(self, scenario: Scenario) -> StudyOutput:
        params = scenario.params
        model, psi, psi_kind = build_ac_model(params.get("model"))
        report = claim13_harness(
            float(params["separation"]),
            float(params["eps1"]),
            float(params["eps2"]),
            model.generator,
            psi,
            nodes=int(params.get("nodes", self.config.quad_nodes)),
            t_search=float(params.get("t_search", 10.0)),
            scan_points=self.config.purity_scan_points,
        )
        payload = report.to_dict()
        payload["psi"] = psi_kind
        columns = ["c", "eps1", "eps2", "T", "t_prime", "delta", "purity_min", "overlap_max",
                   "superfid_bound", "fidelity_max", "pass"]
        return StudyOutput(
            columns=columns,
            rows=[{k: payload[k] for k in columns}],
            result=payload,
            summary={"T": report.T, "t_prime": report.t_prime, "purity_min": report.purity_min,
                     "overlap_max": report.overlap_max},
            verdict="pass" if report.passed else "fail",
            notes=[report.reason] if report.reason else [],
        )

    def _inequality_suite(self, scenario: Scenario) -> StudyOutput:
        trials = int(scenario.params.get("trials", 100))
        report = fidelity_inequality_suite(trials, scenario.seed, max_workers=self.workers)
        columns = ["trial", "family", "dim", "size", "strong_concavity", "concavity", "sqrt_weight_bound",
                   "super_fidelity"]
        return StudyOutput(
            columns=columns,
            rows=report.rows,
            result=report.to_dict(),
            summary=dict(report.min_gaps),
            verdict="pass" if report.passed else "fail",
        )

    # ------------------------------------------------------------------
    # 有限秩截断
    # ------------------------------------------------------------------

    def _truncation(self, scenario: Scenario) -> StudyOutput:
        params = scenario.params
        dim = int(params["dim"])
        ratios = [float(r) for r in params["ratios"]]
        weights = params.get("weights") or [1.0 / len(ratios)] * len(ratios)
        rng = np.random.default_rng(scenario.seed)
        shared = bool(params.get("shared_basis", True))
        states = [geometric_state(dim, r, None if shared else random_unitary(dim, rng)) for r in ratios]
        ensemble = Ensemble.from_pairs(zip(weights, states))

        study = truncation_study(ensemble, params["ranks"], max_workers=self.workers)
        last = study.rows[-1]
        return StudyOutput(
            columns=TRUNCATION_COLUMNS,
            rows=study.rows,
            result=study.to_dict(),
            summary={"d": last["d"], "fidelity_dev": last["fidelity_dev"], "kb_dev": last["kb_dev"],
                     "displacement": last["displacement"]},
        )
