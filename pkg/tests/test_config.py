from __future__ import annotations

from pathlib import Path

import pytest

from flagforge.config import (
    MIN_PRECISION,
    get_runtime_config,
    load_runtime_config,
    reset_runtime_config_for_tests,
)
from flagforge.errors import FlagForgeError


@pytest.fixture(autouse=True)
def _reset_config_cache(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv("FLAGFORGE_THREADS", raising=False)
    monkeypatch.delenv("FLAGFORGE_PRECISION", raising=False)
    reset_runtime_config_for_tests()


def _write_config(tmp_path: Path, text: str) -> Path:
    cfg_dir = tmp_path / "xdg" / "flagforge"
    cfg_dir.mkdir(parents=True, exist_ok=True)
    path = cfg_dir / "config.yaml"
    path.write_text(text, encoding="utf-8")
    return path


def test_defaults_without_any_config(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "xdg"))
    cfg = load_runtime_config(autoload=True)
    assert cfg.threads == 1
    assert cfg.precision == MIN_PRECISION
    assert cfg.graph_format == "json"
    assert cfg.search_max_vertices == 8
    assert cfg.loaded_sources == []


def test_get_runtime_config_before_loading_returns_defaults() -> None:
    assert get_runtime_config().threads == 1


def test_yaml_config_is_applied(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    path = _write_config(
        tmp_path,
        "runtime:\n  threads: 3\n  precision: 80\noutput:\n  graph_format: edgelist\nsearch:\n  max_vertices: 6\n",
    )
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "xdg"))
    cfg = load_runtime_config(autoload=True)
    assert cfg.threads == 3
    assert cfg.precision == 80
    assert cfg.graph_format == "edgelist"
    assert cfg.search_max_vertices == 6
    assert cfg.loaded_sources == [str(path)]
    assert get_runtime_config() is cfg


def test_environment_overrides_yaml(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    _write_config(tmp_path, "runtime:\n  threads: 3\n")
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "xdg"))
    monkeypatch.setenv("FLAGFORGE_THREADS", "5")
    cfg = load_runtime_config(autoload=True)
    assert cfg.threads == 5
    assert "env:FLAGFORGE_THREADS" in cfg.loaded_sources


def test_environment_applies_without_autoload(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    _write_config(tmp_path, "runtime:\n  threads: 3\n")
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "xdg"))
    monkeypatch.setenv("FLAGFORGE_PRECISION", "64")
    cfg = load_runtime_config(autoload=False)
    assert cfg.threads == 1
    assert cfg.precision == 64


@pytest.mark.parametrize("value", ["0", "-2", "many"])
def test_invalid_thread_env_is_a_config_error(monkeypatch: pytest.MonkeyPatch, value: str) -> None:
    monkeypatch.setenv("FLAGFORGE_THREADS", value)
    with pytest.raises(FlagForgeError) as exc:
        load_runtime_config(autoload=False)
    assert exc.value.error_code == "FLAG_007"
    assert exc.value.payload.details["key"] == "FLAGFORGE_THREADS"


@pytest.mark.parametrize(
    "text",
    [
        "runtime:\n  precision: 10\n",
        "output:\n  graph_format: xml\n",
        "search:\n  max_vertices: 12\n",
        "runtime:\n  threads: [1, 2]\n",
        "runtime: {threads: 2\n",
    ],
)
def test_invalid_yaml_values_are_config_errors(tmp_path: Path, monkeypatch: pytest.MonkeyPatch, text: str) -> None:
    _write_config(tmp_path, text)
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "xdg"))
    with pytest.raises(FlagForgeError) as exc:
        load_runtime_config(autoload=True)
    assert exc.value.error_code == "FLAG_007"


def test_cache_reloads_when_config_contents_change(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    _write_config(tmp_path, "runtime:\n  threads: 2\n")
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "xdg"))
    assert load_runtime_config(autoload=True).threads == 2

    _write_config(tmp_path, "runtime:\n  threads: 4\n")
    assert load_runtime_config(autoload=True).threads == 4


def test_cache_reloads_when_xdg_config_home_changes(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    for name, threads in (("a", 2), ("b", 6)):
        cfg_dir = tmp_path / name / "flagforge"
        cfg_dir.mkdir(parents=True)
        (cfg_dir / "config.yaml").write_text(f"runtime:\n  threads: {threads}\n", encoding="utf-8")

    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "a"))
    assert load_runtime_config(autoload=True).threads == 2
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "b"))
    assert load_runtime_config(autoload=True).threads == 6
