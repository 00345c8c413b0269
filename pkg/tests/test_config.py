import pytest

from sparsefactor.config import (
    ModelConfig,
    SfConfig,
    TrainConfig,
    default_factor_count,
    load_config,
    resolve_log_level,
    resolve_threads,
)
from sparsefactor.errors import ConfigurationError


@pytest.mark.parametrize("n,m", [(2, 1), (5, 3), (16, 4), (17, 5), (1024, 10)])
def test_default_factor_count(n, m):
    assert default_factor_count(n) == m


def test_sf_defaults():
    cfg = SfConfig()
    assert (cfg.max_iters, cfg.learning_rate, cfg.seed) == (20000, 1e-2, 0)
    assert cfg.factors_for(64) == 6
    assert SfConfig(m_factors=2).factors_for(64) == 2


def test_overrides_beat_mapping_but_none_does_not():
    cfg = SfConfig.from_mapping({"max_iters": 10, "seed": 3}, max_iters=4, seed=None)
    assert cfg.max_iters == 4
    assert cfg.seed == 3


def test_unknown_keys_rejected():
    with pytest.raises(ConfigurationError, match="learning_rte"):
        SfConfig.from_mapping({"learning_rte": 0.1})


@pytest.mark.parametrize("build", [
    lambda: SfConfig(max_iters=0),
    lambda: SfConfig(learning_rate=-1.0),
    lambda: SfConfig(plateau_factor=0.0),
    lambda: ModelConfig(activation="gelu"),
    lambda: ModelConfig(mode="dense"),
    lambda: TrainConfig(batch_size=0),
])
def test_invalid_values(build):
    with pytest.raises(ConfigurationError):
        build()


def test_value_dim_defaults_to_d():
    assert ModelConfig(d=8).value_dim == 8
    assert ModelConfig(d=8, d_v=3).value_dim == 3


def test_load_config(tmp_path):
    path = tmp_path / "c.yaml"
    path.write_text("sf:\n  max_iters: 7\ntrain:\n")
    sections = load_config(str(path))
    assert sections == {"sf": {"max_iters": 7}, "train": {}}
    assert load_config(None) == {}


@pytest.mark.parametrize("text", ["[1, 2]\n", "solver: {}\n", "sf: [unclosed\n"])
def test_bad_config_files(tmp_path, text):
    path = tmp_path / "c.yaml"
    path.write_text(text)
    with pytest.raises(ConfigurationError):
        load_config(str(path))


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigurationError):
        load_config(str(tmp_path / "nope.yaml"))


def test_thread_resolution(monkeypatch):
    assert resolve_threads(None) == 1
    assert resolve_threads(3) == 3
    monkeypatch.setenv("SF_THREADS", "2")
    assert resolve_threads(8) == 2
    monkeypatch.setenv("SF_THREADS", "0")
    with pytest.raises(ConfigurationError):
        resolve_threads(None)


def test_log_level(monkeypatch):
    assert resolve_log_level() == "INFO"
    assert resolve_log_level(verbose=True) == "DEBUG"
    assert resolve_log_level(quiet=True) == "WARNING"
    monkeypatch.setenv("SF_LOG_LEVEL", "error")
    assert resolve_log_level(verbose=True) == "ERROR"
