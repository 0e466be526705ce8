"""Discrete-event simulation of a subscription insurance market."""

from .config import ConfigError, ScenarioConfig, load_config, preset_config
from .market import build_market, run_market
from .metrics import RunResult, summarize, uniform_deviation

__all__ = [
    "ConfigError",
    "RunResult",
    "ScenarioConfig",
    "build_market",
    "load_config",
    "preset_config",
    "run_market",
    "summarize",
    "uniform_deviation",
]

__version__ = "0.1.0"
