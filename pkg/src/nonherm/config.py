"""Experiment configuration: strict JSON schema with per-experiment fields.

Unknown keys are rejected outright; every run is meant to be reproducible
from its config document alone, so silent defaults for misspelled fields
are not acceptable.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "config_sha256",
    "load_config",
    "parse_config",
]

EXPERIMENTS = (
    "spectrum_sweep",
    "p0_dynamics",
    "mz_dynamics",
    "mz_phase_sweep",
    "train",
    "concurrence_dynamics",
    "bloch_trajectory",
)

_DYNAMICS_ENGINES = ("exact", "trotter_exact_kraus", "trotter_gaussian_kraus")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    seed: int = 0
    tau: float = 1.0
    output_path: str | None = None
    # spectral sweep
    gamma: float | None = None
    omega: float | None = None
    omega_min: float | None = None
    omega_max: float | None = None
    omega_points: int | None = None
    # dynamics
    omega_over_gamma: float | None = None
    steps: int | None = None
    record_every: int = 1
    engine: str = "exact"
    # phase sweep
    gamma_ratios: tuple[float, ...] | None = None
    # training
    t: float | None = None
    t_values: tuple[float, ...] | None = None
    learning_rate: float = 0.05
    max_iterations: int = 2000
    target_cost: float = 1e-3
    optimizer: str = "plain_gd"
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    target_engine: str = "exact"
    K: int | None = None
    checkpoint_path: str | None = None
    checkpoint_paths: tuple[str, ...] | None = None

    def resolved_gamma(self) -> float:
        if self.gamma is not None:
            return self.gamma
        return self.omega / self.omega_over_gamma


def _as_float(value, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field {key!r} must be a number, got {value!r}")
    return float(value)


def _as_int(value, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"field {key!r} must be an integer, got {value!r}")
    return value


def _as_str(value, key: str) -> str:
    if not isinstance(value, str):
        raise ConfigError(f"field {key!r} must be a string, got {value!r}")
    return value


def _as_float_list(value, key: str) -> tuple[float, ...]:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"field {key!r} must be a nonempty list of numbers")
    return tuple(_as_float(v, key) for v in value)


def _as_str_list(value, key: str) -> tuple[str, ...]:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"field {key!r} must be a nonempty list of strings")
    return tuple(_as_str(v, key) for v in value)


_COMMON_KEYS = {"experiment", "seed", "tau", "output_path"}

_ALLOWED_KEYS = {
    "spectrum_sweep": {"gamma", "omega_min", "omega_max", "omega_points"},
    "p0_dynamics": {"omega", "gamma", "omega_over_gamma", "steps", "record_every", "engine", "checkpoint_paths"},
    "mz_dynamics": {"omega", "gamma", "omega_over_gamma", "steps", "record_every", "engine"},
    "mz_phase_sweep": {"omega", "gamma_ratios"},
    "train": {
        "omega",
        "gamma",
        "omega_over_gamma",
        "t",
        "t_values",
        "learning_rate",
        "max_iterations",
        "target_cost",
        "optimizer",
        "adam_beta1",
        "adam_beta2",
        "adam_eps",
        "target_engine",
        "K",
        "checkpoint_path",
    },
    "concurrence_dynamics": {"omega", "gamma", "omega_over_gamma", "steps", "record_every", "engine"},
    "bloch_trajectory": {"omega", "gamma", "omega_over_gamma", "steps", "record_every", "engine"},
}

_PARSERS = {
    "seed": _as_int,
    "tau": _as_float,
    "output_path": _as_str,
    "gamma": _as_float,
    "omega": _as_float,
    "omega_min": _as_float,
    "omega_max": _as_float,
    "omega_points": _as_int,
    "omega_over_gamma": _as_float,
    "steps": _as_int,
    "record_every": _as_int,
    "engine": _as_str,
    "gamma_ratios": _as_float_list,
    "t": _as_float,
    "t_values": _as_float_list,
    "learning_rate": _as_float,
    "max_iterations": _as_int,
    "target_cost": _as_float,
    "optimizer": _as_str,
    "adam_beta1": _as_float,
    "adam_beta2": _as_float,
    "adam_eps": _as_float,
    "target_engine": _as_str,
    "K": _as_int,
    "checkpoint_path": _as_str,
    "checkpoint_paths": _as_str_list,
}


def _require(cfg: ExperimentConfig, *names: str) -> None:
    for name in names:
        if getattr(cfg, name) is None:
            raise ConfigError(f"experiment {cfg.experiment!r} requires field {name!r}")


def _require_rate_pair(cfg: ExperimentConfig) -> None:
    _require(cfg, "omega")
    given = [n for n in ("gamma", "omega_over_gamma") if getattr(cfg, n) is not None]
    if len(given) != 1:
        raise ConfigError("exactly one of 'gamma' or 'omega_over_gamma' must be set")
    if cfg.omega_over_gamma is not None and cfg.omega_over_gamma == 0.0:
        raise ConfigError("omega_over_gamma must be nonzero")
    if cfg.resolved_gamma() < 0.0:
        raise ConfigError("resolved gamma must be >= 0")


def parse_config(doc: dict) -> ExperimentConfig:
    """Validate a raw JSON document and freeze it into an ExperimentConfig."""
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    experiment = doc.get("experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"'experiment' must be one of {EXPERIMENTS}, got {experiment!r}")

    allowed = _COMMON_KEYS | _ALLOWED_KEYS[experiment]
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise ConfigError(f"unknown config keys for {experiment!r}: {unknown}")

    kwargs = {"experiment": experiment}
    for key, value in doc.items():
        if key == "experiment":
            continue
        kwargs[key] = _PARSERS[key](value, key)
    cfg = ExperimentConfig(**kwargs)

    if cfg.tau <= 0.0:
        raise ConfigError("tau must be > 0")
    if cfg.record_every < 1:
        raise ConfigError("record_every must be >= 1")

    if experiment == "spectrum_sweep":
        _require(cfg, "gamma", "omega_min", "omega_max", "omega_points")
        if cfg.omega_points < 2:
            raise ConfigError("omega_points must be >= 2")
        if cfg.gamma < 0.0:
            raise ConfigError("gamma must be >= 0")
    elif experiment in ("p0_dynamics", "mz_dynamics", "concurrence_dynamics", "bloch_trajectory"):
        _require_rate_pair(cfg)
        if experiment == "p0_dynamics" and cfg.engine == "trained_pqc":
            if not cfg.checkpoint_paths:
                raise ConfigError("engine 'trained_pqc' requires 'checkpoint_paths'")
        else:
            _require(cfg, "steps")
            if cfg.steps < 1:
                raise ConfigError("steps must be >= 1")
            engines = _DYNAMICS_ENGINES + (("trained_pqc",) if experiment == "p0_dynamics" else ())
            if experiment == "mz_dynamics":
                engines = ("exact",)
            if cfg.engine not in engines:
                raise ConfigError(f"engine for {experiment!r} must be one of {engines}, got {cfg.engine!r}")
            if cfg.checkpoint_paths is not None:
                raise ConfigError("'checkpoint_paths' is only valid with engine 'trained_pqc'")
    elif experiment == "mz_phase_sweep":
        _require(cfg, "omega", "gamma_ratios")
        if any(r <= 0.0 for r in cfg.gamma_ratios):
            raise ConfigError("gamma_ratios entries must be > 0")
    elif experiment == "train":
        _require_rate_pair(cfg)
        _require(cfg, "checkpoint_path")
        if (cfg.t is None) == (cfg.t_values is None):
            raise ConfigError("exactly one of 't' or 't_values' must be set")
        if cfg.target_engine not in _DYNAMICS_ENGINES:
            raise ConfigError(f"target_engine must be one of {_DYNAMICS_ENGINES}")
        if cfg.target_engine != "exact" and (cfg.K is None or cfg.K < 1):
            raise ConfigError("Trotter target_engine requires K >= 1")
        if not (0.0 <= cfg.target_cost < 2.0):
            raise ConfigError("target_cost must be in [0, 2)")
        if cfg.learning_rate <= 0.0:
            raise ConfigError("learning_rate must be > 0")
        if cfg.max_iterations < 1:
            raise ConfigError("max_iterations must be >= 1")
        if cfg.optimizer not in ("plain_gd", "adam"):
            raise ConfigError("optimizer must be 'plain_gd' or 'adam'")
        if cfg.t_values is not None and "{t}" not in (cfg.checkpoint_path or ""):
            raise ConfigError("sweep training requires a '{t}' placeholder in checkpoint_path")
    return cfg


def load_config(path) -> ExperimentConfig:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return parse_config(doc)


def config_sha256(doc: dict) -> str:
    """Hash of the canonical JSON form (sorted keys, tight separators)."""
    canon = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()
