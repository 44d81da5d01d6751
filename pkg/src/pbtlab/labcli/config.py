"""Experiment configuration in a plain ``key = value`` text format.

Blank lines and ``#`` comments are ignored. Unknown keys are rejected so that
typos do not silently fall back to defaults. Example::

    command = fig1
    seed = 20240501
    samples = 500
    probes = 200
    out = fig1.csv
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, fields, replace
from pathlib import Path

COMMANDS = ("fig1", "unital-scan", "multisender", "classify", "witness")

_DEFAULTS = {
    "fig1": {"samples": 500, "probes": 200},
    "unital-scan": {"samples": 1000, "probes": 1000},
    "multisender": {"samples": 100, "probes": 100, "grid_steps": 11},
    "classify": {"samples": 1000, "probes": 1000},
    "witness": {"samples": 1000, "probes": 1000},
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully deterministic description of one run.

    ``samples`` counts channel parameter points in the sweeps and Monte-Carlo
    probes in ``classify``/``witness``; ``probes`` counts Haar probe states per
    point in the sweeps.
    """

    command: str = "fig1"
    seed: int = 0
    samples: int = 500
    probes: int = 200
    unitary_trials: int = 50
    grid_steps: int = 11
    remainder: str = "identity"
    delta_tol: float = 1e-7
    ebt_tol: float = 1e-7
    bound_tol: float = 1e-7
    out: str | None = None
    channel: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command '{self.command}'; expected one of {', '.join(COMMANDS)}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        for name in ("samples", "probes", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.grid_steps < 2:
            raise ConfigError("grid_steps must be at least 2")
        if self.unitary_trials < 0:
            raise ConfigError("unitary_trials must be non-negative")
        if self.remainder not in ("random", "identity"):
            raise ConfigError("remainder must be 'random' or 'identity'")
        if self.command in ("classify", "witness") and not self.channel:
            raise ConfigError(f"'{self.command}' needs a channel file")

    @classmethod
    def for_command(cls, command: str, **overrides) -> "ExperimentConfig":
        base = dict(_DEFAULTS.get(command, {}))
        base.update({k: v for k, v in overrides.items() if v is not None})
        return cls(command=command, **base)


_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def _convert(key: str, raw: str):
    kind = _TYPES[key]
    try:
        if kind == "int":
            return int(raw, 0)
        if kind == "float":
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse '{raw}'") from exc
    return raw


def parse_config_text(text: str) -> dict:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
    try:
        parser.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    out = {}
    for key, raw in parser["run"].items():
        key = key.replace("-", "_")
        if key not in _TYPES:
            raise ConfigError(f"unknown config key '{key}'")
        out[key] = _convert(key, raw.strip())
    return out


def load_config(path: str | Path | None, command: str, **overrides) -> ExperimentConfig:
    """Defaults for ``command`` < config file < explicit ``overrides``."""
    values: dict = {}
    if path is not None:
        try:
            values = parse_config_text(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    file_cmd = values.pop("command", command)
    if file_cmd != command:
        raise ConfigError(f"config is for '{file_cmd}' but '{command}' was requested")
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig.for_command(command, **values)


def with_overrides(cfg: ExperimentConfig, **kw) -> ExperimentConfig:
    return replace(cfg, **{k: v for k, v in kw.items() if v is not None})
