#!/usr/bin/env python3
"""
qsd-lab 命令行入口
读取一个 JSON 场景，执行对应研究，写出 CSV/JSON/Markdown 产物并打印一行摘要
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from src.config import Config
from src.core.exceptions import (
    ConfigError,
    QsdLabError,
    ScenarioParseError,
    ScenarioValidationError,
    ValidationError,
)
from src.output.formatter import OutputFormatter
from src.scenarios import Scenario, ScenarioRunner, load_scenario
from src.utils.logger import logger, setup_logger

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_NUMERICAL = 4


class QsdLab:
    """场景运行器主类"""

    def __init__(self, config: Optional[Config] = None):
        """初始化组件"""
        self.config = config or Config()
        self.config.validate()
        setup_logger(level=self.config.log_level, log_dir=self.config.log_dir)
        self.runner = ScenarioRunner(self.config)
        self.formatter = OutputFormatter(self.config.TEMPLATES_DIR, self.config.SCHEMAS_DIR)

    def output_prefix(self, scenario: Scenario, override: Optional[str] = None) -> Path:
        """--out 优先，其次场景内的 output，最后 OUTPUT_DIR/<场景文件名>"""
        if override:
            return Path(override)
        if scenario.output:
            return Path(scenario.output)
        stem = scenario.source.stem if scenario.source else scenario.kind
        return Path(self.config.output_dir) / stem

    def run(self, scenario_path: Path, out: Optional[str] = None) -> Dict[str, Path]:
        """运行一个场景并写出产物"""
        logger.info("=" * 50)
        scenario = load_scenario(scenario_path, self.config.SCHEMAS_DIR)
        output = self.runner.run(scenario)
        paths = self.formatter.write_artifacts(self.output_prefix(scenario, out), scenario, output)
        print(self.formatter.format_summary(scenario, output))
        logger.info(f"{scenario.kind} scenario finished")
        logger.info("=" * 50)
        return paths


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsd-lab",
        description="运行最小错误量子态判别的数值研究场景，输出 CSV/JSON 数据与一行摘要",
    )
    parser.add_argument("scenario", type=Path, help="场景 JSON 文件路径")
    parser.add_argument("--out", default=None, help="输出前缀，覆盖场景中的 output")
    parser.add_argument("--threads", type=int, default=None, help="数据并行的最大线程数（默认：全部核心）")
    return parser


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, ScenarioParseError):
        return EXIT_PARSE
    if isinstance(exc, (ScenarioValidationError, ValidationError, ConfigError)):
        return EXIT_VALIDATION
    if isinstance(exc, np.linalg.LinAlgError):
        return EXIT_NUMERICAL
    # 库外的 ValueError 多来自非法输入
    if isinstance(exc, ValueError):
        return EXIT_VALIDATION
    return EXIT_NUMERICAL


def report_error(exc: BaseException) -> int:
    """错误以一个 JSON 对象写到标准错误，返回退出码"""
    payload = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ScenarioParseError):
        if exc.line is not None:
            payload["line"] = exc.line
        if exc.column is not None:
            payload["column"] = exc.column
    print(json.dumps(payload, sort_keys=True, ensure_ascii=False), file=sys.stderr)
    return exit_code_for(exc)


def main(argv: Optional[List[str]] = None) -> int:
    """主函数入口"""
    args = build_parser().parse_args(argv)
    try:
        config = Config()
        if args.threads is not None:
            if args.threads < 1:
                raise ConfigError(f"--threads must be at least 1, got {args.threads}")
            config.set("MAX_WORKERS", args.threads)
        QsdLab(config).run(args.scenario, args.out)
        return EXIT_OK
    except (QsdLabError, ValueError, ArithmeticError) as e:
        logger.error(f"Run failed: {type(e).__name__}: {e}")
        return report_error(e)


if __name__ == "__main__":
    sys.exit(main())
