"""TOML run configuration with strict validation."""

from __future__ import annotations

import math
import sys

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = ["ConfigError", "load_config", "validate_config", "SCHEMA"]


class ConfigError(ValueError):
    """Unreadable file, unknown key, or a value of the wrong kind."""


def _number(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _float(path, v):
    if not _number(v):
        raise ConfigError(f"{path}: expected a number, got {v!r}")
    if not math.isfinite(v):
        raise ConfigError(f"{path}: value must be finite")
    return float(v)


def _int(path, v):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{path}: expected an integer, got {v!r}")
    return v


def _str(path, v):
    if not isinstance(v, str):
        raise ConfigError(f"{path}: expected a string, got {v!r}")
    return v


def _bool(path, v):
    if not isinstance(v, bool):
        raise ConfigError(f"{path}: expected true or false, got {v!r}")
    return v


def _floats(length=None):
    def check(path, v):
        if not isinstance(v, list):
            raise ConfigError(f"{path}: expected an array")
        if length is not None and len(v) != length:
            raise ConfigError(f"{path}: expected {length} entries, got {len(v)}")
        return [_float(f"{path}[{i}]", x) for i, x in enumerate(v)]
    return check


def _rows(width):
    def check(path, v):
        if not isinstance(v, list) or not v:
            raise ConfigError(f"{path}: expected a nonempty array of arrays")
        return [_floats(width)(f"{path}[{i}]", row) for i, row in enumerate(v)]
    return check


def _str_or_list(path, v):
    if isinstance(v, str):
        return v
    if isinstance(v, list):
        return [_str(f"{path}[{i}]", x) for i, x in enumerate(v)]
    raise ConfigError(f"{path}: expected a string or an array of strings")


SCHEMA = {
    "resolution": _int,
    "seed": _int,
    "threads": _int,
    "family": {
        "name": _str, "m": _float, "a": _float, "e": _float, "punctures": _rows(3), "tau": _float,
    },
    "mass": {
        "method": _str, "radii": _floats(), "truncation": _float, "n_r": _int, "n_theta": _int,
    },
    "curvature": {
        "points": _rows(2), "n_rho": _int, "n_z": _int,
    },
    "check": {
        "condition": _str, "grid": _str, "rho0": _float, "n_rho": _int, "n_z": _int,
        "r_range": _floats(2), "surface_radius": _float,
    },
    "geometry": {
        "region": _floats(3), "curve": _rows(2), "points": _rows(3),
    },
    "norms": {
        "region": _floats(3), "p": _float, "target": _str, "frame": _str, "beta": _float,
        "shell": _floats(2), "holder_target": _str,
    },
    "sweep": {
        "schedule": _str, "masses": _floats(), "a_ratio": _float, "e_ratio": _float,
        "strengths": _floats(), "region": _floats(3), "p": _float, "beta": _float,
        "holder_shell": _floats(2), "brill": _bool,
    },
    "analysis": {
        "suite": _str_or_list,
    },
    "output": {
        "csv": _str, "json": _str,
    },
}


def validate_config(raw, schema=SCHEMA, path=""):
    """Check ``raw`` against ``schema``; returns a normalised copy."""
    if not isinstance(raw, dict):
        raise ConfigError(f"{path or 'config'}: expected a table")
    out = {}
    for key, value in raw.items():
        where = f"{path}.{key}" if path else key
        if key not in schema:
            raise ConfigError(f"unknown key {where!r}")
        rule = schema[key]
        if isinstance(rule, dict):
            out[key] = validate_config(value, rule, where)
        else:
            out[key] = rule(where, value)
    return out


def load_config(path):
    """Read and validate a TOML file; ``None`` gives an empty configuration."""
    if path is None:
        return {}
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None
    return validate_config(raw)
