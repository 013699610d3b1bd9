"""Estimated fitness from attention statistics.

Two forms are provided.  The generic weighted form combines the three
attention parameters linearly, ``alpha*d + beta*t + gamma*p``, with the
weights left to configuration (they have to be tuned empirically, and
the pupil weight only matters once a tracker that reports pupil size is
attached).

The normalized form is what the evolutionary loop actually consumes:
each zone's share of transitions and share of dwell contribute half
each, so the eight values form a probability distribution.  When the
user explicitly clicks a favourite, that zone's value is boosted by a
cube root -- for a base in (0,1) the cube root is strictly larger, so a
click always amplifies, never penalizes.  The other seven values are
left untouched.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .gaze import ZONE_COUNT, ZoneStats

# Uniform fallback for one half-term when a generation has no attention at
# all: 8 zones x 1/16 per half keeps the no-choice sum at 1.
_UNIFORM_HALF = 1.0 / (2.0 * ZONE_COUNT)


@dataclass(frozen=True)
class FitnessWeights:
    """Linear weights for dwell, transitions, and pupil diameter."""

    alpha: float = 0.5
    beta: float = 0.5
    gamma: float = 0.0


@dataclass(frozen=True)
class EstimatedFitness:
    """Per-zone fitness estimate in [0,1], with the clicked zone if any."""

    values: tuple[float, ...]
    chosen: Optional[int] = None

    def __post_init__(self) -> None:
        if len(self.values) != ZONE_COUNT:
            raise ValueError(f"fitness must cover exactly {ZONE_COUNT} zones")
        if self.chosen is not None and not 1 <= self.chosen <= ZONE_COUNT:
            raise ValueError(f"chosen zone must be 1..{ZONE_COUNT}, got {self.chosen}")

    def argmax_index(self) -> int:
        """Index (0-based) of the highest value; lowest index wins ties."""
        best = 0
        for i in range(1, ZONE_COUNT):
            if self.values[i] > self.values[best]:
                best = i
        return best


def weighted_fitness(stats: ZoneStats, weights: FitnessWeights) -> tuple[float, ...]:
    """Per-zone ``alpha*d + beta*t + gamma*p``; a missing pupil counts as 0."""
    return tuple(
        weights.alpha * stats.dwell_ms[j]
        + weights.beta * stats.transitions[j]
        + weights.gamma * (stats.pupil_mm[j] or 0.0)
        for j in range(ZONE_COUNT)
    )


def normalized_fitness(stats: ZoneStats, chosen: Optional[int] = None) -> EstimatedFitness:
    """Normalized per-zone fitness with the optional chosen-zone boost.

    base_j = t_j / (2 * sum t) + d_j / (2 * sum d); a zero total on either
    axis falls back to a uniform 1/16 per zone for that half, so empty
    generations still yield a valid distribution.  The chosen zone's value
    is the cube root of its base; all other zones keep the base.
    """
    if chosen is not None and not 1 <= chosen <= ZONE_COUNT:
        raise ValueError(f"chosen zone must be 1..{ZONE_COUNT}, got {chosen}")
    total_t = stats.total_transitions()
    total_d = stats.total_dwell_ms()
    values = []
    for j in range(ZONE_COUNT):
        half_t = stats.transitions[j] / (2.0 * total_t) if total_t > 0 else _UNIFORM_HALF
        half_d = stats.dwell_ms[j] / (2.0 * total_d) if total_d > 0 else _UNIFORM_HALF
        values.append(half_t + half_d)
    if chosen is not None:
        values[chosen - 1] = values[chosen - 1] ** (1.0 / 3.0)
    return EstimatedFitness(values=tuple(values), chosen=chosen)
