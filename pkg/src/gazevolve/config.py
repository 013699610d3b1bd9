"""Engine configuration file: one JSON document covering everything tunable.

Shape (all sections optional, defaults applied per field):

    {
      "ga": {"population_size": 8, "crossover_prob": 0.9, "mutation_rate": 0.0417,
             "elite_count": 1, "selection": "roulette", "tournament_k": 2,
             "max_generations": null},
      "weights": {"alpha": 0.5, "beta": 0.5, "gamma": 0.0},
      "fatigue_threshold": 0.5,
      "user": {"kind": "brightness", "temperature": 50.0,
               "samples_per_generation": 120, "choice_prob": 0.8, "noise": 0.0}
    }

Unknown keys are rejected so typos fail loudly instead of silently
falling back to defaults.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .evolution import ConfigError, GaConfig
from .fitness import FitnessWeights
from .gaze import FATIGUE_THRESHOLD
from .simuser import UserModel


@dataclass(frozen=True)
class EngineConfig:
    ga: GaConfig = field(default_factory=GaConfig)
    weights: FitnessWeights = field(default_factory=FitnessWeights)
    fatigue_threshold: float = FATIGUE_THRESHOLD
    user: UserModel = field(default_factory=UserModel)

    def to_dict(self) -> dict:
        return {
            "ga": self.ga.to_dict(),
            "weights": {
                "alpha": self.weights.alpha,
                "beta": self.weights.beta,
                "gamma": self.weights.gamma,
            },
            "fatigue_threshold": self.fatigue_threshold,
            "user": self.user.to_dict(),
        }


def _build(section: str, cls, data: dict):
    try:
        return cls(**data)
    except TypeError as exc:
        raise ConfigError(f"bad {section!r} section: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"bad {section!r} section: {exc}") from exc


def config_from_dict(data: dict) -> EngineConfig:
    known = {"ga", "weights", "fatigue_threshold", "user"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    threshold = data.get("fatigue_threshold", FATIGUE_THRESHOLD)
    if not isinstance(threshold, (int, float)) or threshold < 0:
        raise ConfigError(f"fatigue_threshold must be a non-negative number, got {threshold!r}")
    return EngineConfig(
        ga=_build("ga", GaConfig, data.get("ga", {})),
        weights=_build("weights", FitnessWeights, data.get("weights", {})),
        fatigue_threshold=float(threshold),
        user=_build("user", UserModel, data.get("user", {})),
    )


def load_config(path: str | Path) -> EngineConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc.msg})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    return config_from_dict(data)


def save_config(config: EngineConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(config.to_dict(), indent=2) + "\n", encoding="utf-8")
