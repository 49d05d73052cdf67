"""Run configuration: YAML file, then flag overrides, checked against defaults.

Every command has a nested default mapping. A config file or ``--set``
override may only use keys that appear there; anything else is rejected.
"""

from __future__ import annotations

import copy
from typing import Any, Mapping

import yaml


class ConfigError(ValueError):
    pass


_RESERVOIR = {"dimension": 1, "eta": 100.0, "cutoff": None, "temperature": 1.0, "prefactor": 0.1}
_TIMES = {"start": 0.01, "stop": 100.0, "num": 50, "spacing": "log", "values": None}

DEFAULTS: dict[str, dict[str, Any]] = {
    "semiclassical": {
        "seed": 0,
        "field": {"b0": 1.0, "bstep": 0.1, "p_up": 0.1, "p_down": 0.1, "dt": 0.01, "g": 1.0},
        "s0": [1.0, 0.0, 0.0],
        "t_max": 60.0,
        "members": [0, 1],
        "ensembles": [100, 500],
    },
    "gamma": {
        "seed": 0,
        "reservoir": dict(_RESERVOIR),
        "times": dict(_TIMES),
        "eta_sweep": [],
    },
    "collective": {
        "seed": 0,
        "reservoir": {**_RESERVOIR, "eta": 1.0, "dimension": None},
        "dimensions": [1, 3],
        "ts": [0.0, 0.1, 1.0, 10.0, 1000.0],
        "times": {**_TIMES, "stop": 1000.0},
    },
    "register": {
        "seed": 0,
        "reservoir": dict(_RESERVOIR),
        "n_qubits": 3,
        "topology": "shared",
        "positions": None,
        "initial": "ghz",
        "elements": None,
        "encoding": {"enabled": False, "n_logical": 1, "pair_positions": None,
                     "pair_offset": 0.0, "logical_state": "plus"},
        "times": {**_TIMES, "stop": 10.0, "num": 20},
    },
    "scaling": {
        "seed": 0,
        "reservoir": dict(_RESERVOIR),
        "topologies": ["independent", "shared"],
        "tau": 1.0,
        "target_p": 0.99,
        "sizes": {"start": 1, "stop": 10},
        "mode": "closed",
        "t_ratio": 1.0e6,
    },
}


def _merge(base: dict, override: Mapping, path: str = "") -> dict:
    for key, value in override.items():
        where = f"{path}{key}"
        if key not in base:
            raise ConfigError(f"unknown config key {where!r}")
        if isinstance(base[key], dict):
            if not isinstance(value, Mapping):
                raise ConfigError(f"config key {where!r} must be a mapping")
            _merge(base[key], value, where + ".")
        else:
            base[key] = value
    return base


def parse_assignment(text: str) -> tuple[list[str], Any]:
    """Split ``a.b=value`` into a key path and a YAML-parsed value."""
    if "=" not in text:
        raise ConfigError(f"override {text!r} is not of the form key=value")
    key, raw = text.split("=", 1)
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse value in {text!r}: {exc}") from exc
    return key.strip().split("."), value


def load_config(command: str, path: str | None = None,
                overrides: list[str] | tuple[str, ...] = ()) -> dict:
    """Defaults, then the file at ``path``, then each ``key=value`` override."""
    config = copy.deepcopy(DEFAULTS[command])
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            try:
                data = yaml.safe_load(fh) or {}
            except yaml.YAMLError as exc:
                raise ConfigError(f"cannot parse {path}: {exc}") from exc
        if not isinstance(data, Mapping):
            raise ConfigError(f"{path} must hold a mapping")
        _merge(config, data)
    for item in overrides:
        keys, value = parse_assignment(item)
        nested: Any = value
        for key in reversed(keys):
            nested = {key: nested}
        _merge(config, nested)
    return config
