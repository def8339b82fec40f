import json

import pytest

from mvrisk.config.config import Config


def test_values_from_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({
        "tolerance": {"pareto": 1e-6},
        "enumeration": {"oracle_max_scenarios": 12},
        "logging": {"level": "DEBUG"},
    }), encoding="utf-8")
    config = Config(str(path))
    assert config.pareto_tol == 1e-6
    assert config.oracle_max_scenarios == 12
    assert config.log_level == "DEBUG"
    assert config.probability_sum_tol == 1e-9


def test_missing_file_gives_defaults(tmp_path):
    config = Config(str(tmp_path / "absent.json"))
    assert config.normalized_sum_tol == 1e-12
    assert config.level_eps == 1e-12
    assert config.law_tol == 1e-9
    assert config.grid_batch_cells == 1_000_000
    assert (config.laws_seed, config.laws_trials) == (0, 1000)
    assert config.log_level == "WARNING"


def test_invalid_json(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{tolerance:", encoding="utf-8")
    with pytest.raises(ValueError):
        Config(str(path))


def test_config_path_variable(tmp_path, monkeypatch):
    path = tmp_path / "custom.json"
    path.write_text(json.dumps({"laws": {"trials": 25}}), encoding="utf-8")
    monkeypatch.setenv("CONFIG_PATH", str(path))
    assert Config().laws_trials == 25
