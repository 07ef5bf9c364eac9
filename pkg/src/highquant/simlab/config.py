"""Flat ``key = value`` experiment configuration files.

Keys mirror the ``simulate`` command-line flags.  Lists are comma-separated;
commas inside parentheses belong to model parameters, e.g.
``models = lognormal, exact_gw(1,2,-1)``.  ``#`` starts a comment.
"""

from __future__ import annotations

import math
from typing import Any, Mapping

from ..errors import ConfigurationError
from .experiment import ExperimentConfig

__all__ = ["split_list", "parse_config_text", "load_config", "build_config", "power_of_two_grid"]

_KEYS = {
    "models": "list",
    "estimators": "list",
    "nmin": "int",
    "nmax": "int",
    "reps": "int",
    "iota": "float",
    "tau": "floatlist",
    "seed": "int",
    "out": "str",
    "eta": "floatlist",
    "floor": "bool",
    "workers": "int",
    "level": "float",
}

_ESTIMATOR_ALIASES = {"gw": "GW", "loggw": "logGW", "gp": "GP"}


def split_list(text: str) -> list[str]:
    items, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            items.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    items.append("".join(cur).strip())
    return [i for i in items if i]


def _convert(key: str, raw: str) -> Any:
    kind = _KEYS[key]
    try:
        if kind == "int":
            return int(raw, 0)
        if kind == "float":
            return float(raw)
        if kind == "floatlist":
            return [float(v) for v in split_list(raw)]
        if kind == "list":
            return split_list(raw)
        if kind == "bool":
            low = raw.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
    except ValueError as exc:
        raise ConfigurationError(f"bad value for {key!r}: {raw!r}") from exc
    return raw.strip()


def parse_config_text(text: str) -> dict:
    out: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigurationError(f"line {lineno}: duplicate key {key!r}")
        out[key] = _convert(key, raw)
    return out


def load_config(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def power_of_two_grid(nmin: int, nmax: int) -> tuple[int, ...]:
    """Powers of two in ``[nmin, nmax]``."""
    if nmin > nmax:
        raise ConfigurationError(f"nmin={nmin} exceeds nmax={nmax}")
    lo = math.ceil(math.log2(nmin))
    hi = math.floor(math.log2(nmax))
    grid = tuple(2**j for j in range(lo, hi + 1))
    if not grid:
        raise ConfigurationError(f"no power of two in [{nmin}, {nmax}]")
    return grid


def build_config(values: Mapping[str, Any]) -> ExperimentConfig:
    """Turn parsed key/values (config file or CLI flags) into an ExperimentConfig."""
    unknown = set(values) - set(_KEYS)
    if unknown:
        raise ConfigurationError(f"unknown keys: {', '.join(sorted(unknown))}")
    kw: dict = {}
    if "models" in values:
        kw["models"] = tuple(values["models"])
    if "estimators" in values:
        ests = []
        for e in values["estimators"]:
            if e.lower() not in _ESTIMATOR_ALIASES:
                raise ConfigurationError(f"unknown estimator {e!r}; choose gw, loggw or gp")
            ests.append(_ESTIMATOR_ALIASES[e.lower()])
        kw["estimators"] = tuple(ests)
    if "nmin" in values or "nmax" in values:
        kw["n_grid"] = power_of_two_grid(values.get("nmin", 2**5), values.get("nmax", 2**16))
    mapping = {"reps": "replications", "iota": "iota", "seed": "seed", "out": "output_path",
               "floor": "floor_at_max", "workers": "workers", "level": "level"}
    for src, dst in mapping.items():
        if src in values:
            kw[dst] = values[src]
    if "tau" in values:
        kw["tau_grid"] = tuple(values["tau"])
    if "eta" in values:
        kw["eta_grid"] = tuple(values["eta"])
    return ExperimentConfig(**kw)
