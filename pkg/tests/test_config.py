import pytest

from scribeview.config import ServiceConfig, load_config
from scribeview.errors import ConfigError


def test_defaults():
    cfg = ServiceConfig()
    assert cfg.host == "127.0.0.1"
    assert cfg.port == 8000
    assert cfg.data_dir == "data"
    assert cfg.backend == "stub"
    assert cfg.cors_origins == ()


def test_validation():
    with pytest.raises(ConfigError):
        ServiceConfig(backend="psychic")
    with pytest.raises(ConfigError):
        ServiceConfig(port=0)
    with pytest.raises(ConfigError):
        ServiceConfig(port=90000)


def test_load_explicit_file(tmp_path):
    path = tmp_path / "scribeview.toml"
    path.write_text(
        'port = 9001\ndata_dir = "elsewhere"\ncors_origins = ["http://localhost:5173"]\n'
    )
    cfg = load_config(path)
    assert cfg.port == 9001
    assert cfg.data_dir == "elsewhere"
    assert cfg.cors_origins == ("http://localhost:5173",)
    assert cfg.backend == "stub"  # unset keys keep their defaults


def test_missing_explicit_file_is_an_error(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.toml")


def test_default_path_falls_back_to_defaults(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert load_config() == ServiceConfig()


def test_default_path_is_read_when_present(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "scribeview.toml").write_text("port = 9002\n")
    assert load_config().port == 9002


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "scribeview.toml"
    path.write_text("portt = 9001\n")
    with pytest.raises(ConfigError) as exc:
        load_config(path)
    assert "portt" in str(exc.value)


def test_bad_toml_rejected(tmp_path):
    path = tmp_path / "scribeview.toml"
    path.write_text("port = = 1\n")
    with pytest.raises(ConfigError):
        load_config(path)
