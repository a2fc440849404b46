"""Configuration file handling for the CLI.

Config files are simple key = value lines (a TOML-like subset): '#' starts a
comment, values may be quoted, section headers in brackets are ignored. Keys
use the same snake_case names as the long CLI flags; flags always win over
file values. The EVE_CONFIG environment variable names a default config file
used when --config is not given.
"""

from __future__ import annotations

import os

from .errors import EveError

ENV_CONFIG = "EVE_CONFIG"


class ConfigError(EveError):
    """Unreadable or malformed config file."""


def read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#") or (line.startswith("[") and line.endswith("]")):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.split("#", 1)[0].strip()
        if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
            value = value[1:-1]
        if not key:
            raise ConfigError(f"{path}:{lineno}: empty key")
        values[key] = value
    return values


def effective_config(config_flag: str | None) -> dict[str, str]:
    """Values from --config, else from $EVE_CONFIG, else empty."""
    if config_flag is not None:
        return read_config_file(config_flag)
    env_path = os.environ.get(ENV_CONFIG)
    if env_path:
        return read_config_file(env_path)
    return {}


def pick(
    flag_value, cfg: dict[str, str], key: str, default, convert=str
):
    """Merge one setting: explicit flag > config file > default."""
    if flag_value is not None:
        return flag_value
    if key in cfg:
        raw = cfg[key]
        try:
            return convert(raw)
        except (TypeError, ValueError):
            raise ConfigError(f"config key {key!r}: cannot parse {raw!r}") from None
    return default
