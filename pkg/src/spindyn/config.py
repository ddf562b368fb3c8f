"""Flat key = value run configuration with command-line overrides."""

from __future__ import annotations

import os

import numpy as np


class ConfigError(ValueError):
    """Invalid configuration file or option value (CLI exit code 1)."""


def parse_vec3(text):
    """Comma-separated triple -> float array, e.g. '0,0,1'."""
    parts = str(text).split(",")
    if len(parts) != 3:
        raise ConfigError(f"expected three comma-separated values, got {text!r}")
    try:
        return np.array([float(p) for p in parts])
    except ValueError as exc:
        raise ConfigError(f"bad vector component in {text!r}") from exc


def load_config_file(path):
    """Parse `key = value` lines; '#' starts a comment, blank lines ignored."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = line.split("=", 1)
            key = key.strip().replace("-", "_")
            if not key:
                raise ConfigError(f"{path}:{lineno}: empty key")
            if key in out:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            out[key] = value.strip()
    return out


def resolve_seed(value):
    """Explicit seed, else the SPINDYN_SEED environment variable, else 0."""
    if value is not None:
        return int(value)
    env = os.environ.get("SPINDYN_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"SPINDYN_SEED must be an integer, got {env!r}") from exc
    return 0
