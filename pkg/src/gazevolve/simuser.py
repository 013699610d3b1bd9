"""Synthetic users for headless runs.

A user model emits a gaze stream over a presented population and then an
optional click, standing in for a human in front of the screen.  The
``brightness`` kind looks preferentially at brighter colors: each sample's
zone is drawn from a softmax over member brightness, optionally perturbed
to a uniform random zone to model the inconsistency of human judgements.
The ``random`` kind has no preference at all and serves as the null
control -- under it the population's brightness should show no systematic
trend.

Samples arrive at a fixed 60 Hz cadence at the center of the drawn zone,
with no pupil data (a pointer-driven stand-in cannot measure pupils).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional

from .evolution import Population
from .gaze import ZONE_COUNT, GazeSample, ZoneLayout
from .genome import brightness, decode_color

USER_KINDS = ("brightness", "random")
SAMPLE_HZ = 60.0


@dataclass(frozen=True)
class UserModel:
    kind: str = "brightness"
    temperature: float = 50.0
    samples_per_generation: int = 120
    choice_prob: float = 0.8
    noise: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in USER_KINDS:
            raise ValueError(f"kind must be one of {USER_KINDS}, got {self.kind!r}")
        if self.temperature <= 0:
            raise ValueError(f"temperature must be > 0, got {self.temperature}")
        if self.samples_per_generation < 0:
            raise ValueError(f"samples_per_generation must be >= 0")
        if not 0.0 <= self.choice_prob <= 1.0:
            raise ValueError(f"choice_prob must be in [0,1], got {self.choice_prob}")
        if not 0.0 <= self.noise <= 1.0:
            raise ValueError(f"noise must be in [0,1], got {self.noise}")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "temperature": self.temperature,
            "samples_per_generation": self.samples_per_generation,
            "choice_prob": self.choice_prob,
            "noise": self.noise,
        }

    @classmethod
    def from_dict(cls, d: dict) -> UserModel:
        return cls(**d)


def _zone_probabilities(pop: Population, model: UserModel) -> list[float]:
    if model.kind == "random":
        return [1.0 / ZONE_COUNT] * ZONE_COUNT
    scores = [brightness(decode_color(g)) / model.temperature for g in pop.members]
    top = max(scores)
    exps = [math.exp(s - top) for s in scores]  # shift for numerical stability
    total = sum(exps)
    return [e / total for e in exps]


def _argmax_brightness(pop: Population) -> int:
    """0-based index of the brightest member, lowest index on ties."""
    best = 0
    best_value = brightness(decode_color(pop.members[0]))
    for i in range(1, len(pop.members)):
        value = brightness(decode_color(pop.members[i]))
        if value > best_value:
            best, best_value = i, value
    return best


def simulate_gaze(
    pop: Population, layout: ZoneLayout, model: UserModel, rng: random.Random
) -> list[GazeSample]:
    """Emit one generation's gaze stream over the presented population.

    ``samples_per_generation`` samples at 60 Hz; each sample's zone comes
    from the model's preference distribution, replaced by a uniform random
    zone with probability ``noise``.  The sample position is the zone
    center and timestamps are strictly increasing.
    """
    probs = _zone_probabilities(pop, model)
    cumulative = []
    acc = 0.0
    for p in probs:
        acc += p
        cumulative.append(acc)

    samples = []
    for i in range(model.samples_per_generation):
        pick = rng.random()
        zone_index = ZONE_COUNT - 1
        for j, edge in enumerate(cumulative):
            if pick < edge:
                zone_index = j
                break
        if model.noise > 0 and rng.random() < model.noise:
            zone_index = rng.randrange(ZONE_COUNT)
        x, y = layout.zones[zone_index].center()
        samples.append(GazeSample(t_ms=round(i * 1000.0 / SAMPLE_HZ), x=x, y=y))
    return samples


def simulate_choice(pop: Population, model: UserModel, rng: random.Random) -> Optional[int]:
    """The user's click for this generation, or None.

    With probability ``choice_prob`` the brightness user clicks the
    brightest member's zone (lowest zone on ties); the random user clicks
    a uniformly random zone, so its choices exert no directional pressure.
    """
    if rng.random() >= model.choice_prob:
        return None
    if model.kind == "random":
        return rng.randrange(ZONE_COUNT) + 1
    return _argmax_brightness(pop) + 1
