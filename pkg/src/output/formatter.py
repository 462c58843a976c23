#!/usr/bin/env python3
"""
输出格式化模块
CSV（17 位有效数字）、排序键 JSON、jinja2 渲染的一行摘要与 Markdown 报告
"""

import csv
import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
from jinja2 import Environment, FileSystemLoader, StrictUndefined
from jsonschema import Draft202012Validator

from ..core.exceptions import ConsistencyError
from ..scenarios.runner import StudyOutput
from ..scenarios.scenario import Scenario, load_schema
from ..utils.logger import logger


def to_jsonable(value: Any) -> Any:
    """numpy 类型转为内置类型，inf/nan 写成 null"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, Path):
        return str(value)
    return value


def format_number(value: Any) -> str:
    """CSV 单元格：浮点数 17 位有效数字，None 为空"""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return "%.17g" % float(value) if math.isfinite(value) else ""
    return str(value)


def _short(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.6g}"
    if value is None:
        return "n/a"
    return str(value)


class OutputFormatter:
    """输出格式化器"""

    def __init__(self, templates_dir: Path, schemas_dir: Optional[Path] = None):
        """
        初始化格式化器

        Args:
            templates_dir: 模板目录路径
            schemas_dir: JSON schema 目录，用于校验结果文件
        """
        self.templates_dir = templates_dir
        self.schemas_dir = schemas_dir
        self.env = Environment(
            loader=FileSystemLoader(str(templates_dir)),
            undefined=StrictUndefined,
            keep_trailing_newline=True,
        )
        self.env.filters["short"] = _short

    def build_document(self, scenario: Scenario, output: StudyOutput) -> Dict[str, Any]:
        """结果 JSON 的内容；不含时间戳，保证重复运行逐字节一致"""
        return to_jsonable({
            "kind": scenario.kind,
            "seed": scenario.seed,
            "params": scenario.params,
            "columns": output.columns,
            "result": output.result,
            "summary": {"values": output.summary, "verdict": output.verdict},
        })

    def validate_document(self, document: Dict[str, Any]) -> None:
        validator = Draft202012Validator(load_schema("result.schema.json", self.schemas_dir))
        error = next(iter(validator.iter_errors(document)), None)
        if error is not None:
            raise ConsistencyError(f"result document does not match its schema: {error.message}")

    def format_json(self, document: Dict[str, Any]) -> str:
        return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"

    def write_csv(self, path: Path, columns: List[str], rows: Iterable[Dict[str, Any]]) -> None:
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=columns, extrasaction="ignore")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: format_number(row.get(k)) for k in columns})

    def format_summary(self, scenario: Scenario, output: StudyOutput) -> str:
        """一行摘要：关键数值与判定"""
        template = self.env.get_template("summary.j2")
        return template.render(kind=scenario.kind, values=output.summary, verdict=output.verdict).strip()

    def format_markdown(self, scenario: Scenario, output: StudyOutput, artifacts: Dict[str, str]) -> str:
        template = self.env.get_template("report.md.j2")
        return template.render(
            kind=scenario.kind,
            seed=scenario.seed,
            values=output.summary,
            verdict=output.verdict,
            notes=output.notes,
            rows=len(output.rows),
            artifacts=artifacts,
        )

    def write_artifacts(self, prefix: Path, scenario: Scenario, output: StudyOutput) -> Dict[str, Path]:
        """
        写出 <prefix>.csv、<prefix>.json 与 <prefix>.md

        Returns:
            产物路径字典
        """
        prefix = Path(prefix)
        prefix.parent.mkdir(parents=True, exist_ok=True)
        paths = {
            "csv": prefix.with_name(prefix.name + ".csv"),
            "json": prefix.with_name(prefix.name + ".json"),
            "md": prefix.with_name(prefix.name + ".md"),
        }

        document = self.build_document(scenario, output)
        self.validate_document(document)
        self.write_csv(paths["csv"], output.columns, output.rows)
        paths["json"].write_text(self.format_json(document), encoding="utf-8")
        names = {k: p.name for k, p in paths.items()}
        paths["md"].write_text(self.format_markdown(scenario, output, names), encoding="utf-8")

        logger.info(f"Artifacts written: {', '.join(str(p) for p in paths.values())}")
        return paths
