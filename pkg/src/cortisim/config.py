"""Experiment configuration: the dataclass, plain-text files, model building.

Config files are `key = value` lines (# comments allowed). Keys match the
dataclass field names; the model-array keys listed in MODEL_ARRAY_KEYS may
override the knob-derived initial arrays with explicit flattened matrices,
and every experiment writes its realized arrays back out in the same format
so the initial distributions are versionable artifacts.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, DomainError
from .generative import (
    FOOD,
    FRIEND,
    LONELY,
    N_ACTIONS,
    N_MODALITIES,
    N_OUTCOMES,
    N_STATES,
    TUMMY,
    Action,
    GenerativeModel,
    default_model,
)

VARIANT_PRESETS = ("A", "B", "C", "D")

# Flattened row-major array overrides accepted in config files.
MODEL_ARRAY_KEYS = {
    "a_tummy": (N_OUTCOMES, N_STATES),
    "a_lonely": (N_OUTCOMES, N_STATES),
    "a_food": (N_OUTCOMES, N_STATES),
    "a_friend": (N_OUTCOMES, N_STATES),
    "b_eat": (N_STATES, N_STATES),
    "b_play": (N_STATES, N_STATES),
    "b_explore": (N_STATES, N_STATES),
    "c_tummy": (N_OUTCOMES,),
    "c_lonely": (N_OUTCOMES,),
    "c_food": (N_OUTCOMES,),
    "c_friend": (N_OUTCOMES,),
    "d_prior": (N_STATES,),
}


@dataclass
class ExperimentConfig:
    """Everything a run needs; defaults are the shipped calibration."""

    variant: str = "D"
    steps: int = 300
    runs: int = 10
    base_seed: int = 0
    resource_probability: float = 0.2
    decay: float = 0.03
    learning_rate: float = 0.05
    set_point_energy: float = 0.7
    set_point_social: float = 0.7
    consumption_gain: float = 0.4
    policy_precision: float = 12.0
    likelihood_strength: float = 0.88
    exteroceptive_strength: float = 0.8
    eat_reliability: float = 0.7
    play_reliability: float = 0.8
    transition_persistence: float = 0.8
    explore_persistence: float = 0.77
    cross_relief: float = 0.0
    preference_tummy: float = 8.0
    preference_lonely: float = 7.8
    preference_food: float = 0.0
    preference_friend: float = 0.0
    dirichlet_scale: float = 0.25
    output_dir: str = "out"
    workers: int = 1
    figures: str = "first"  # first | all | none
    forced_action: str | None = None  # debug hook for closed-form tests
    model_overrides: dict[str, list[float]] = field(default_factory=dict)

    def validate(self) -> None:
        if self.variant not in VARIANT_PRESETS:
            raise ConfigError(f"variant must be one of {VARIANT_PRESETS}, got {self.variant!r}")
        if self.steps < 1:
            raise ConfigError(f"steps must be >= 1, got {self.steps!r}")
        if self.runs < 1:
            raise ConfigError(f"runs must be >= 1, got {self.runs!r}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers!r}")
        for name in ("resource_probability",):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {value!r}")
        for name in ("decay", "learning_rate", "consumption_gain"):
            value = getattr(self, name)
            if value < 0:
                raise ConfigError(f"{name} must be >= 0, got {value!r}")
        for name in ("set_point_energy", "set_point_social"):
            value = getattr(self, name)
            if not 0.05 <= value <= 0.99:
                raise ConfigError(f"{name} must be in [0.05, 0.99], got {value!r}")
        if self.policy_precision <= 0:
            raise ConfigError(
                f"policy_precision must be > 0, got {self.policy_precision!r}")
        if self.figures not in ("first", "all", "none"):
            raise ConfigError(f"figures must be first/all/none, got {self.figures!r}")
        if self.forced_action is not None and self.forced_action not in Action.__members__.keys() \
                and self.forced_action not in ("eat", "play", "explore"):
            raise ConfigError(f"forced_action must be eat/play/explore, got {self.forced_action!r}")
        for key in self.model_overrides:
            if key not in MODEL_ARRAY_KEYS:
                raise ConfigError(f"unknown model array key {key!r}")
        try:
            build_model(self)
        except DomainError as err:
            raise ConfigError(f"model knobs are inconsistent: {err}") from err


def build_model(config: ExperimentConfig) -> GenerativeModel:
    """Knob-derived stock model, with any explicit array overrides applied."""
    model = default_model(
        likelihood_strength=config.likelihood_strength,
        exteroceptive_strength=config.exteroceptive_strength,
        eat_reliability=config.eat_reliability,
        play_reliability=config.play_reliability,
        transition_persistence=config.transition_persistence,
        explore_persistence=config.explore_persistence,
        cross_relief=config.cross_relief,
        preference_tummy=config.preference_tummy,
        preference_lonely=config.preference_lonely,
        preference_food=config.preference_food,
        preference_friend=config.preference_friend,
        dirichlet_scale=config.dirichlet_scale,
    )
    if not config.model_overrides:
        return model
    likelihood = model.likelihood.copy()
    transitions = model.transitions.copy()
    preferences = model.preferences.copy()
    prior = model.initial_prior.copy()
    modality_slot = {"a_tummy": TUMMY, "a_lonely": LONELY, "a_food": FOOD, "a_friend": FRIEND}
    pref_slot = {"c_tummy": TUMMY, "c_lonely": LONELY, "c_food": FOOD, "c_friend": FRIEND}
    action_slot = {"b_eat": Action.EAT, "b_play": Action.PLAY, "b_explore": Action.EXPLORE}
    for key, values in config.model_overrides.items():
        shape = MODEL_ARRAY_KEYS[key]
        arr = np.asarray(values, dtype=np.float64)
        if arr.size != int(np.prod(shape)):
            raise ConfigError(f"{key} needs {int(np.prod(shape))} values, got {arr.size}")
        arr = arr.reshape(shape)
        if key in modality_slot:
            likelihood[modality_slot[key]] = arr
        elif key in action_slot:
            transitions[action_slot[key]] = arr
        elif key in pref_slot:
            preferences[pref_slot[key]] = arr
        else:
            prior = arr
    try:
        return GenerativeModel(
            likelihood=likelihood,
            transitions=transitions,
            preferences=preferences,
            initial_prior=prior,
            transition_counts=transitions * config.dirichlet_scale,
        )
    except DomainError as err:
        raise ConfigError(f"model override rejected: {err}") from err


def model_snapshot_lines(model: GenerativeModel) -> list[str]:
    """The realized initial arrays in config-file syntax."""
    rows = {
        "a_tummy": model.likelihood[TUMMY],
        "a_lonely": model.likelihood[LONELY],
        "a_food": model.likelihood[FOOD],
        "a_friend": model.likelihood[FRIEND],
        "b_eat": model.transitions[Action.EAT],
        "b_play": model.transitions[Action.PLAY],
        "b_explore": model.transitions[Action.EXPLORE],
        "c_tummy": model.preferences[TUMMY],
        "c_lonely": model.preferences[LONELY],
        "c_food": model.preferences[FOOD],
        "c_friend": model.preferences[FRIEND],
        "d_prior": model.initial_prior,
    }
    lines = ["# Initial model arrays (flattened row-major); loadable as config overrides."]
    for key, arr in rows.items():
        flat = ", ".join(repr(float(v)) for v in np.asarray(arr).ravel())
        lines.append(f"{key} = {flat}")
    return lines


_BOOL_WORDS = {"true": True, "false": False, "yes": True, "no": False, "1": True, "0": False}


def _parse_scalar(name: str, raw: str, kind: type):
    raw = raw.strip()
    try:
        if kind is bool:
            return _BOOL_WORDS[raw.lower()]
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        return raw
    except (KeyError, ValueError) as err:
        raise ConfigError(f"bad value for {name}: {raw!r}") from err


def load_config(path: str | Path, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Read `key = value` lines over a base config (defaults if omitted)."""
    config = dataclasses.replace(base) if base is not None else ExperimentConfig()
    config.model_overrides = dict(config.model_overrides)
    field_types = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err}") from err
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key in MODEL_ARRAY_KEYS:
            try:
                config.model_overrides[key] = [float(v) for v in raw.split(",")]
            except ValueError as err:
                raise ConfigError(f"{path}:{lineno}: bad float list for {key}") from err
        elif key == "forced_action":
            config.forced_action = None if raw.lower() in ("", "none") else raw
        elif key in field_types:
            kind = {"steps": int, "runs": int, "base_seed": int, "workers": int}.get(key, None)
            if kind is None:
                kind = str if key in ("variant", "output_dir", "figures") else float
            setattr(config, key, _parse_scalar(key, raw, kind))
        else:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
    return config


def config_lines(config: ExperimentConfig) -> list[str]:
    """Serialize a config to the same `key = value` format load_config reads."""
    lines = []
    for f in dataclasses.fields(ExperimentConfig):
        value = getattr(config, f.name)
        if f.name == "model_overrides":
            for key, values in value.items():
                lines.append(f"{key} = {', '.join(repr(float(v)) for v in values)}")
        elif value is None:
            lines.append(f"{f.name} = none")
        else:
            lines.append(f"{f.name} = {value}")
    return lines


def config_to_dict(config: ExperimentConfig) -> dict:
    """JSON-ready echo of every field."""
    return dataclasses.asdict(config)
