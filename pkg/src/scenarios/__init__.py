"""
场景：解析、校验与执行
"""

from .runner import ScenarioRunner, StudyOutput
from .scenario import KINDS, Scenario, load_scenario, parse_scenario

__all__ = ["KINDS", "Scenario", "ScenarioRunner", "StudyOutput", "load_scenario", "parse_scenario"]
