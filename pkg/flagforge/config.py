from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from flagforge.errors import make_error

MIN_PRECISION = 50
MAX_SEARCH_VERTICES = 9
GRAPH_FORMATS = ("json", "edgelist")


@dataclass
class RuntimeConfig:
    threads: int = 1
    precision: int = MIN_PRECISION
    graph_format: str = "json"
    search_max_vertices: int = 8
    loaded_sources: list[str] = field(default_factory=list)


_RUNTIME_CONFIG: RuntimeConfig | None = None
_RUNTIME_CONFIG_KEY: tuple[Any, ...] | None = None


def _file_signature(path: Path) -> tuple[int, str] | None:
    if not path.exists() or not path.is_file():
        return None
    data = path.read_bytes()
    digest = hashlib.sha1(data).hexdigest()
    return (len(data), digest)


def _config_root() -> Path:
    base = Path(os.environ.get("XDG_CONFIG_HOME", Path.home() / ".config"))
    return base / "flagforge"


def _cache_key(*, autoload: bool) -> tuple[Any, ...]:
    env = (os.environ.get("FLAGFORGE_THREADS"), os.environ.get("FLAGFORGE_PRECISION"))
    if not autoload:
        return (autoload, env)
    yaml_path = _config_root() / "config.yaml"
    return (autoload, env, str(yaml_path), _file_signature(yaml_path))


def _config_error(key: str, value: Any, expected: str, source: str) -> Exception:
    return make_error(
        error_code="FLAG_007",
        message=f"Invalid value for {key}.",
        details={"key": key, "value": value, "expected": expected, "source": source},
        recovery_hint=f"Set {key} to {expected} or remove it.",
    )


def _positive_int(key: str, value: Any, source: str, *, minimum: int, maximum: int | None = None) -> int:
    if isinstance(value, str):
        text = value.strip()
        if not text.lstrip("-").isdigit():
            raise _config_error(key, value, f"an integer >= {minimum}", source)
        value = int(text)
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise _config_error(key, value, f"an integer >= {minimum}", source)
    if maximum is not None and value > maximum:
        raise _config_error(key, value, f"an integer in [{minimum}, {maximum}]", source)
    return value


def _parse_config_yaml(path: Path) -> RuntimeConfig:
    cfg = RuntimeConfig()
    if not path.exists():
        return cfg
    source = str(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as exc:
        raise _config_error("config.yaml", str(exc), "valid YAML", source) from None
    if not isinstance(raw, dict):
        return cfg

    runtime = raw.get("runtime", {})
    if isinstance(runtime, dict):
        if "threads" in runtime:
            cfg.threads = _positive_int("runtime.threads", runtime["threads"], source, minimum=1)
        if "precision" in runtime:
            cfg.precision = _positive_int("runtime.precision", runtime["precision"], source, minimum=MIN_PRECISION)

    output = raw.get("output", {})
    if isinstance(output, dict) and "graph_format" in output:
        fmt = output["graph_format"]
        if fmt not in GRAPH_FORMATS:
            raise _config_error("output.graph_format", fmt, " or ".join(GRAPH_FORMATS), source)
        cfg.graph_format = fmt

    search = raw.get("search", {})
    if isinstance(search, dict) and "max_vertices" in search:
        cfg.search_max_vertices = _positive_int(
            "search.max_vertices", search["max_vertices"], source, minimum=1, maximum=MAX_SEARCH_VERTICES
        )
    return cfg


def _apply_env(cfg: RuntimeConfig) -> None:
    threads = os.environ.get("FLAGFORGE_THREADS")
    if threads:
        cfg.threads = _positive_int("FLAGFORGE_THREADS", threads, "environment", minimum=1)
        cfg.loaded_sources.append("env:FLAGFORGE_THREADS")
    precision = os.environ.get("FLAGFORGE_PRECISION")
    if precision:
        cfg.precision = _positive_int("FLAGFORGE_PRECISION", precision, "environment", minimum=MIN_PRECISION)
        cfg.loaded_sources.append("env:FLAGFORGE_PRECISION")


def load_runtime_config(*, autoload: bool = True) -> RuntimeConfig:
    global _RUNTIME_CONFIG, _RUNTIME_CONFIG_KEY
    cache_key = _cache_key(autoload=autoload)
    if _RUNTIME_CONFIG is not None and _RUNTIME_CONFIG_KEY == cache_key:
        return _RUNTIME_CONFIG

    if autoload:
        yaml_path = _config_root() / "config.yaml"
        cfg = _parse_config_yaml(yaml_path)
        if yaml_path.exists():
            cfg.loaded_sources.append(str(yaml_path))
    else:
        cfg = RuntimeConfig()
    # Environment variables apply even without file autoload.
    _apply_env(cfg)

    _RUNTIME_CONFIG = cfg
    _RUNTIME_CONFIG_KEY = cache_key
    return cfg


def get_runtime_config() -> RuntimeConfig:
    if _RUNTIME_CONFIG is None:
        return RuntimeConfig()
    return _RUNTIME_CONFIG


def reset_runtime_config_for_tests() -> None:
    global _RUNTIME_CONFIG, _RUNTIME_CONFIG_KEY
    _RUNTIME_CONFIG = None
    _RUNTIME_CONFIG_KEY = None
