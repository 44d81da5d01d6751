"""Experiment harness and the ``pbt-lab`` command line."""

from .config import ConfigError, ExperimentConfig, load_config, parse_config_text
from .experiments import SweepResult, run_fig1, run_multisender, run_unital_scan

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "SweepResult",
    "load_config",
    "parse_config_text",
    "run_fig1",
    "run_multisender",
    "run_unital_scan",
]
