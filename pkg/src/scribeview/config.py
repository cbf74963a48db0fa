"""Service configuration, loaded from a TOML file with sane defaults.

Secrets never live here: cloud credentials come from the standard
environment variables. The config file carries only non-secret wiring
(ports, paths, backend selection, region/bucket names).
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

DEFAULT_CONFIG_PATH = "scribeview.toml"

BACKENDS = ("stub", "real")


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    data_dir: str = "data"
    backend: str = "stub"
    stub_dir: str | None = None
    polls_to_complete: int = 1
    homophones_path: str | None = None  # None selects the bundled dictionary
    cors_origins: tuple[str, ...] = ()
    static_dir: str | None = None  # built frontend to serve at /, if any
    aws_region: str | None = None
    aws_bucket: str | None = None

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ConfigError(f"unknown backend {self.backend!r}, expected one of {BACKENDS}")
        if not 0 < self.port < 65536:
            raise ConfigError(f"port {self.port} out of range")


def load_config(path: str | Path | None = None) -> ServiceConfig:
    """Read config from TOML; an explicit path must exist, the conventional
    ./scribeview.toml is optional."""
    if path is None:
        candidate = Path(DEFAULT_CONFIG_PATH)
        if not candidate.is_file():
            return ServiceConfig()
        path = candidate
    path = Path(path)
    try:
        raw = tomllib.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config {path} is not valid TOML: {exc}") from exc

    known = {f.name for f in fields(ServiceConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"config {path} has unknown keys: {sorted(unknown)}")
    if "cors_origins" in raw:
        raw["cors_origins"] = tuple(raw["cors_origins"])
    return ServiceConfig(**raw)
