"""Scenario configuration: defaults, presets, file and environment loading.

Parameter names follow the market-model parameter table (snake_cased). A
config file is YAML with flat ``key: value`` pairs and an optional
``preset`` key; every key can also be overridden from the environment as
``LLOYDSIM_<KEY>`` (upper case).
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping

import yaml

from .engine import DAYS_PER_YEAR

ENV_PREFIX = "LLOYDSIM_"

TOGGLES = ("attritional", "catastrophe", "premium_em", "var_em", "lead_follow", "markup")
TOPOLOGIES = ("random", "circular", "graph")


class ConfigError(ValueError):
    """Invalid configuration. ``field`` names the offending key when known."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


@dataclass(frozen=True)
class ScenarioConfig:
    # broker
    risks_per_day: float = 0.06
    number_of_peril_regions: int = 10
    risk_limit: float = 10_000_000.0
    # broker-syndicate network
    lead_top_k: int = 2
    follow_top_k: int = 5
    topology: str = "random"
    # attritional loss generator
    yearly_claim_frequency: float = 0.1
    cov: float = 1.0
    mu: float = 3_000_000.0
    # catastrophe loss generator
    mean_catastrophe_events_per_year: float = 0.05
    pareto_shape: float = 5.0
    minimum_catastrophe_damage: float = 0.25
    catastrophe_truncation_multiple: float = 10.0
    # syndicate
    capital: float = 10_000_000.0
    default_lead_quote_line_size: float = 0.5
    default_follow_quote_line_size: float = 0.1
    # actuarial
    internal_experience_weight: float = 0.5
    loss_experience_recency_weight: float = 0.2
    volatility_weight: float = 0.0
    initial_industry_claim_frequency: float = 0.1
    initial_industry_claim_severity: float = 3_000_000.0
    # underwriting
    underwriter_markup_recency_weighting: float = 0.2
    markup_sensitivity: float = 1.0
    target_win_rate: float = 0.5
    # dividend
    profit_fraction: float = 0.4
    # VaR exposure management
    var_em_exceedance_probability: float = 0.05
    var_em_safety_factor: float = 1.0
    var_em_samples: int = 10_000
    # premium exposure management
    premium_reserve_ratio: float = 0.5
    minimum_capital_reserving_ratio: float = 1.0
    maximum_scaling_factor: float = 1.0
    # market shape and run control
    num_syndicates: int = 5
    num_brokers: int = 25
    horizon_years: int = 50
    seeds: tuple[int, ...] = tuple(range(10))
    lead_consolidation_offset: int = 3
    lead_selection_offset: int = 5
    follow_consolidation_offset: int = 8
    follow_selection_offset: int = 10
    # feature toggles
    attritional: bool = True
    catastrophe: bool = False
    premium_em: bool = True
    var_em: bool = False
    lead_follow: bool = False
    markup: bool = False
    preset: str | None = None

    @property
    def end_day(self) -> int:
        return self.horizon_years * DAYS_PER_YEAR

    @property
    def effective_follow_top_k(self) -> int:
        return self.follow_top_k if self.lead_follow else 0

    @property
    def catastrophe_rate(self) -> float:
        return self.mean_catastrophe_events_per_year if self.catastrophe else 0.0

    @property
    def claim_frequency(self) -> float:
        return self.yearly_claim_frequency if self.attritional else 0.0

    def replace(self, **changes: Any) -> "ScenarioConfig":
        return validate(dataclasses.replace(self, **changes))

    def to_dict(self) -> dict[str, Any]:
        d = dataclasses.asdict(self)
        d["seeds"] = list(self.seeds)
        return d


# Columns of the four-scenario parameter table, plus the no-EM comparison run.
PRESETS: dict[str, dict[str, Any]] = {
    "scenario1": dict(
        attritional=True, catastrophe=False, premium_em=True, var_em=False, lead_follow=False,
        markup=False, follow_top_k=0,
    ),
    "scenario2": dict(
        attritional=True, catastrophe=True, premium_em=True, var_em=False, lead_follow=False,
        markup=False, follow_top_k=0,
    ),
    "scenario3": dict(
        attritional=True, catastrophe=True, premium_em=False, var_em=True, lead_follow=False,
        markup=False, follow_top_k=0,
    ),
    "scenario4": dict(
        attritional=True, catastrophe=False, premium_em=True, var_em=False, lead_follow=True,
        markup=False, follow_top_k=5,
    ),
    "no_em": dict(
        attritional=True, catastrophe=True, premium_em=False, var_em=False, lead_follow=False,
        markup=False, follow_top_k=0,
    ),
}

_FIELDS = {f.name: f for f in fields(ScenarioConfig)}


def _coerce(name: str, value: Any) -> Any:
    default = getattr(ScenarioConfig(), name)
    try:
        if name == "seeds":
            return parse_seeds(value)
        if name == "preset" or name == "topology":
            return None if value is None else str(value)
        if isinstance(default, bool):
            if isinstance(value, str):
                low = value.strip().lower()
                if low in ("1", "true", "yes", "on"):
                    return True
                if low in ("0", "false", "no", "off"):
                    return False
                raise ValueError(value)
            if isinstance(value, (bool, int)) and value in (0, 1):
                return bool(value)
            raise ValueError(value)
        if isinstance(default, int):
            f = float(value)
            if f != int(f):
                raise ValueError(value)
            return int(f)
        if isinstance(default, float):
            return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"cannot interpret {value!r} as {type(default).__name__}", name) from None
    return value


def parse_seeds(value: Any) -> tuple[int, ...]:
    """``5`` -> seeds 0..4; ``"1,4,9"`` or a list -> exactly those seeds."""
    if isinstance(value, (list, tuple)):
        seeds = tuple(int(v) for v in value)
    elif isinstance(value, int):
        seeds = tuple(range(value))
    else:
        text = str(value).strip()
        if "," in text or text.startswith("["):
            seeds = tuple(int(v) for v in text.strip("[]").split(",") if v.strip())
        else:
            seeds = tuple(range(int(text)))
    if not seeds:
        raise ConfigError("at least one seed is required", "seeds")
    if any(s < 0 for s in seeds):
        raise ConfigError("seeds must be non-negative", "seeds")
    return seeds


def _check(cond: bool, name: str, message: str) -> None:
    if not cond:
        raise ConfigError(message, name)


def validate(cfg: ScenarioConfig) -> ScenarioConfig:
    """Range checks; returns ``cfg`` unchanged or raises :class:`ConfigError`."""
    for name in (
        "internal_experience_weight",
        "underwriter_markup_recency_weighting",
        "profit_fraction",
    ):
        _check(0.0 <= getattr(cfg, name) <= 1.0, name, "must lie in [0, 1]")
    _check(0.0 < cfg.loss_experience_recency_weight <= 1.0, "loss_experience_recency_weight", "must lie in (0, 1]")
    for name in ("risk_limit", "mu", "capital", "initial_industry_claim_severity"):
        _check(getattr(cfg, name) > 0, name, "must be positive")
    for name in (
        "risks_per_day",
        "yearly_claim_frequency",
        "mean_catastrophe_events_per_year",
        "volatility_weight",
        "var_em_safety_factor",
        "premium_reserve_ratio",
        "minimum_capital_reserving_ratio",
        "initial_industry_claim_frequency",
        "markup_sensitivity",
    ):
        _check(getattr(cfg, name) >= 0, name, "must be non-negative")
    _check(cfg.cov > 0, "cov", "must be positive")
    _check(cfg.pareto_shape > 1, "pareto_shape", "must exceed 1 for a finite mean")
    _check(0 < cfg.minimum_catastrophe_damage <= 1, "minimum_catastrophe_damage", "must lie in (0, 1]")
    _check(cfg.catastrophe_truncation_multiple > 1, "catastrophe_truncation_multiple", "must exceed 1")
    _check(0 < cfg.default_lead_quote_line_size <= 1, "default_lead_quote_line_size", "must lie in (0, 1]")
    _check(0 < cfg.default_follow_quote_line_size <= 1, "default_follow_quote_line_size", "must lie in (0, 1]")
    _check(0 < cfg.var_em_exceedance_probability < 1, "var_em_exceedance_probability", "must lie in (0, 1)")
    _check(cfg.var_em_samples >= 1000, "var_em_samples", "needs at least 1000 Monte Carlo samples")
    _check(cfg.maximum_scaling_factor > 0, "maximum_scaling_factor", "must be positive")
    _check(0 <= cfg.target_win_rate <= 1, "target_win_rate", "must lie in [0, 1]")
    _check(cfg.number_of_peril_regions >= 1, "number_of_peril_regions", "must be at least 1")
    _check(cfg.lead_top_k >= 1, "lead_top_k", "must be at least 1")
    _check(cfg.follow_top_k >= 0, "follow_top_k", "must be non-negative")
    _check(cfg.num_syndicates >= 0, "num_syndicates", "must be non-negative")
    _check(cfg.num_brokers >= 0, "num_brokers", "must be non-negative")
    _check(cfg.horizon_years >= 1, "horizon_years", "must be at least 1")
    _check(cfg.topology in TOPOLOGIES, "topology", f"must be one of {TOPOLOGIES}")
    _check(len(cfg.seeds) >= 1, "seeds", "need at least one seed")
    offsets = (
        cfg.lead_consolidation_offset,
        cfg.lead_selection_offset,
        cfg.follow_consolidation_offset,
        cfg.follow_selection_offset,
    )
    _check(
        0 < offsets[0] < offsets[1] < offsets[2] < offsets[3],
        "follow_selection_offset",
        "deadline offsets must be positive and strictly increasing",
    )
    _check(cfg.preset is None or cfg.preset in PRESETS, "preset", f"unknown preset, expected one of {sorted(PRESETS)}")
    return cfg


def build_config(
    values: Mapping[str, Any] | None = None,
    preset: str | None = None,
    env: Mapping[str, str] | None = None,
) -> ScenarioConfig:
    """Merge defaults, a preset, explicit values and environment overrides.

    A preset pins the feature toggles of its column; an explicit value that
    contradicts one of them is an error, as is naming two different presets.
    """
    values = dict(values or {})
    unknown = sorted(set(values) - set(_FIELDS))
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(unknown)}")
    if env is not None:
        for name in _FIELDS:
            key = ENV_PREFIX + name.upper()
            if key in env:
                values[name] = env[key]

    file_preset = values.pop("preset", None)
    if preset is not None and file_preset is not None and preset != file_preset:
        raise ConfigError(f"preset {preset!r} conflicts with configured preset {file_preset!r}", "preset")
    chosen = preset or file_preset
    if chosen is not None and chosen not in PRESETS:
        raise ConfigError(f"unknown preset {chosen!r}, expected one of {sorted(PRESETS)}", "preset")

    merged: dict[str, Any] = {}
    pinned = PRESETS.get(chosen, {}) if chosen else {}
    merged.update(pinned)
    for name, raw in values.items():
        value = _coerce(name, raw)
        if name in pinned and name in TOGGLES and value != pinned[name]:
            raise ConfigError(f"preset {chosen!r} fixes {name}={pinned[name]}, got {value}", name)
        merged[name] = value
    merged["preset"] = chosen
    return validate(ScenarioConfig(**merged))


def load_config(
    path: str | os.PathLike | None = None,
    preset: str | None = None,
    env: Mapping[str, str] | None = None,
) -> ScenarioConfig:
    """Read a YAML key/value file (optional) and resolve it into a config."""
    values: dict[str, Any] = {}
    if path is not None:
        text = Path(path).read_text()
        loaded = yaml.safe_load(text) if text.strip() else {}
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise ConfigError(f"{path}: expected key/value mapping at top level")
        values = loaded
    return build_config(values, preset=preset, env=os.environ if env is None else env)


def preset_config(name: str, **overrides: Any) -> ScenarioConfig:
    return build_config(overrides, preset=name, env={})
