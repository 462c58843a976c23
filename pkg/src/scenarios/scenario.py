#!/usr/bin/env python3
"""
场景文件
读取 JSON 场景，按 schemas/scenario.schema.json 做结构校验，再做按类型的语义校验
"""

import json
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Callable, Dict, Optional

from jsonschema import Draft202012Validator

from ..core.exceptions import ScenarioParseError, ScenarioValidationError

logger = logging.getLogger(__name__)

KINDS = (
    "hellstrom",
    "bounds",
    "urm-sweep",
    "chernoff",
    "tensor-power",
    "nmixture",
    "claim13",
    "truncation",
    "inequality-suite",
)

SCHEMAS_DIR = Path(__file__).resolve().parent.parent / "output" / "schemas"


@dataclass(frozen=True)
class Scenario:
    """一次运行的研究：类型、种子、输出前缀与类型相关参数"""

    kind: str
    seed: int = 0
    output: Optional[str] = None
    params: Dict[str, Any] = field(default_factory=dict)
    source: Optional[Path] = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "seed": self.seed, "params": self.params}
        if self.output is not None:
            out["output"] = self.output
        return out


@lru_cache(maxsize=None)
def load_schema(name: str, schemas_dir: Optional[Path] = None) -> dict:
    path = Path(schemas_dir or SCHEMAS_DIR) / name
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def _location(error) -> str:
    return "/".join(str(p) for p in error.absolute_path) or "<root>"


def validate_document(doc: Any, schemas_dir: Optional[Path] = None) -> None:
    """结构校验；报告路径最浅的一条错误"""
    validator = Draft202012Validator(load_schema("scenario.schema.json", schemas_dir))
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.absolute_path), _location(e)))
    if errors:
        first = errors[0]
        raise ScenarioValidationError(f"{_location(first)}: {first.message}")


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ScenarioValidationError(message)


def _ascending_pair(values, name: str) -> None:
    if values is not None:
        _require(values[0] <= values[1], f"{name} must satisfy lo <= hi, got {values}")


def _check_bounds(params: dict) -> None:
    random = params.get("random")
    if random:
        _ascending_pair(random.get("dims"), "random.dims")
        _ascending_pair(random.get("sizes"), "random.sizes")
        if random.get("sizes"):
            _require(random["sizes"][0] >= 2, "random.sizes must start at 2 or more")


def _check_urm_sweep(params: dict) -> None:
    grid = params["grid"]
    points = grid.get("points", 2)
    _require(points == 1 or grid["stop"] > grid["start"], "grid.stop must exceed grid.start")
    rates = params.get("rates")
    if rates is not None:
        _require(len(rates) >= 2, "a sweep needs at least two rates")
        _require(len(set(rates)) == len(rates), f"rates must be pairwise distinct, got {rates}")
        weights = params.get("weights")
        _require(weights is None or len(weights) == len(rates), "weights must have one entry per rate")
    if params.get("model") == "qubit":
        _require(params.get("psi") is None, "psi applies to the ac model only")
    window = params.get("window")
    _ascending_pair(window, "window")
    interval = params.get("interval")
    if interval is not None:
        _require(interval[0] < interval[1], f"interval must satisfy a < b, got {interval}")


def _check_nmixture(params: dict) -> None:
    density = params["density"]
    if density["kind"] in ("two-uniform", "multi-uniform"):
        _require("separation" in density, f"{density['kind']} density needs a separation")
    partition = params.get("partition", "natural")
    if isinstance(partition, list):
        for cell in partition:
            _require(cell[0] < cell[1], f"partition cell {cell} is empty")
    _ascending_pair(params.get("window"), "window")


def _check_claim13(params: dict) -> None:
    model = params.get("model") or {}
    interval = model.get("interval")
    if interval is not None:
        _require(interval[0] < interval[1], f"interval must satisfy a < b, got {interval}")


def _check_truncation(params: dict) -> None:
    ranks = params["ranks"]
    _require(all(b > a for a, b in zip(ranks[:-1], ranks[1:])), f"ranks must be strictly ascending: {ranks}")
    _require(ranks[-1] <= params["dim"], f"ranks must not exceed dim {params['dim']}")
    weights = params.get("weights")
    _require(weights is None or len(weights) == len(params["ratios"]), "weights must have one entry per ratio")


_CHECKS: Dict[str, Callable[[dict], None]] = {
    "bounds": _check_bounds,
    "urm-sweep": _check_urm_sweep,
    "nmixture": _check_nmixture,
    "claim13": _check_claim13,
    "truncation": _check_truncation,
}


def parse_scenario(text: str, source: Optional[Path] = None, schemas_dir: Optional[Path] = None) -> Scenario:
    """
    解析并校验场景文本

    Raises:
        ScenarioParseError: 不是合法 JSON（带行列号）
        ScenarioValidationError: 结构或语义校验失败
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc

    validate_document(doc, schemas_dir)
    params = doc.get("params", {})
    check = _CHECKS.get(doc["kind"])
    if check is not None:
        check(params)

    scenario = Scenario(
        kind=doc["kind"],
        seed=int(doc.get("seed", 0)),
        output=doc.get("output"),
        params=params,
        source=source,
    )
    logger.debug(f"Loaded {scenario.kind} scenario (seed {scenario.seed}) from {source or '<text>'}")
    return scenario


def load_scenario(path, schemas_dir: Optional[Path] = None) -> Scenario:
    """读取场景文件"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioParseError(f"cannot read scenario file {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise ScenarioParseError(
            f"scenario file {path} is not valid UTF-8: {exc.reason} at byte {exc.start}"
        ) from exc
    return parse_scenario(text, source=path, schemas_dir=schemas_dir)
