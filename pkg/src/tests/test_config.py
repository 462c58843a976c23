"""配置与并行工具测试"""

import logging
from pathlib import Path

import pytest

from src.config import Config
from src.core.exceptions import ConfigError
from src.main import QsdLab
from src.utils.parallel import parallel_map

CONFIG_KEYS = list(Config.INT_DEFAULTS) + list(Config.FLOAT_DEFAULTS) + ["OUTPUT_DIR", "LOG_LEVEL", "LOG_DIR"]


@pytest.fixture
def clean_env(monkeypatch):
    for key in CONFIG_KEYS:
        monkeypatch.delenv(key, raising=False)
    return monkeypatch


def write_config(tmp_path: Path, text: str) -> Path:
    path = tmp_path / "config.yml"
    path.write_text(text, encoding="utf-8")
    return path


class TestConfig:
    def test_defaults_without_file(self, clean_env, tmp_path):
        config = Config(tmp_path / "missing.yml")
        assert config.quad_nodes == 128
        assert config.decay_threshold == pytest.approx(0.1)
        assert config.workers is None
        assert config.log_level == "INFO"
        assert config.output_dir == config.BASE_DIR / "storage" / "runs"
        assert config.problems() == []

    def test_yaml_values(self, clean_env, tmp_path):
        config = Config(write_config(tmp_path, "QUAD_NODES: 64\nMAX_WORKERS: 3\nLOG_LEVEL: debug\n"))
        assert config.quad_nodes == 64
        assert config.workers == 3
        assert config.log_level == "DEBUG"

    def test_environment_overrides_yaml(self, clean_env, tmp_path):
        clean_env.setenv("QUAD_NODES", " 32\xa0")
        config = Config(write_config(tmp_path, "QUAD_NODES: 64\n"))
        assert config.quad_nodes == 32

    def test_unparsable_value_falls_back(self, clean_env, tmp_path):
        config = Config(write_config(tmp_path, "WIENER_SAMPLES: many\n"))
        assert config.wiener_samples == 20001

    def test_problems(self, clean_env, tmp_path):
        config = Config(write_config(tmp_path, "DECAY_THRESHOLD: 1.5\nMAX_WORKERS: -1\nEXPLICIT_N_CAP: 0\n"))
        issues = config.problems()
        assert len(issues) == 3
        with pytest.raises(ConfigError, match="DECAY_THRESHOLD"):
            config.validate()

    def test_invalid_config_stops_the_lab(self, clean_env, tmp_path):
        with pytest.raises(ConfigError):
            QsdLab(Config(write_config(tmp_path, "QUAD_NODES: 1\n")))

    def test_set_overrides(self, clean_env, tmp_path):
        config = Config(tmp_path / "missing.yml")
        config.set("max_workers", 2)
        assert config.workers == 2

    def test_absolute_output_dir(self, clean_env, tmp_path):
        config = Config(write_config(tmp_path, f"OUTPUT_DIR: {tmp_path / 'runs'}\n"))
        assert config.output_dir == tmp_path / "runs"

    def test_log_dir_adds_file_handler(self, clean_env, tmp_path):
        log_dir = tmp_path / "logs"
        config = Config(write_config(tmp_path, f"LOG_DIR: {log_dir}\n"))
        assert config.log_dir == log_dir
        QsdLab(config)
        root = logging.getLogger("src")
        handlers = [h for h in root.handlers
                    if isinstance(h, logging.FileHandler) and Path(h.baseFilename).parent == log_dir]
        try:
            assert len(handlers) == 1
            assert log_dir.is_dir()
            QsdLab(config)
            assert sum(isinstance(h, logging.FileHandler) and Path(h.baseFilename).parent == log_dir
                       for h in root.handlers) == 1
        finally:
            for handler in handlers:
                root.removeHandler(handler)
                handler.close()

    def test_empty_log_dir(self, clean_env, tmp_path):
        assert Config(write_config(tmp_path, "LOG_DIR: ''\n")).log_dir is None


class TestParallelMap:
    @pytest.mark.parametrize("workers", [None, 1, 3])
    def test_order_is_preserved(self, workers):
        assert parallel_map(lambda x: x * x, list(range(50)), workers) == [x * x for x in range(50)]

    def test_empty_input(self):
        assert parallel_map(lambda x: x, []) == []

    def test_exception_propagates(self):
        def fail_on_seven(x):
            if x == 7:
                raise ValueError("seven")
            return x

        with pytest.raises(ValueError, match="seven"):
            parallel_map(fail_on_seven, list(range(20)), 4)
