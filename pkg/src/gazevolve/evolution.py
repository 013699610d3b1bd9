"""The genetic loop: selection, crossover, mutation, elitism.

One generation step takes the current population plus the estimated
fitness vector computed from attention, keeps the best-estimated
members unchanged (elitism, to survive a noisy evaluator), and fills
the rest via fitness-proportional selection, single-point crossover,
and per-bit mutation.  The finished generation is shuffled into zone
slots so that a positional gaze bias (users favouring, say, the top-left
zone) cannot compound across generations.

Every random draw comes from the caller's ``random.Random`` instance;
a step is a pure function of (population, fitness, config, rng state).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .fitness import EstimatedFitness
from .genome import GENOME_LENGTH, Genome, random_genome

SELECTION_METHODS = ("roulette", "tournament")


class ConfigError(ValueError):
    """Raised for an invalid evolutionary configuration."""


class DimensionMismatchError(ValueError):
    """Raised when a fitness vector does not match the population size."""


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 8
    crossover_prob: float = 0.9
    mutation_rate: float = 1.0 / GENOME_LENGTH
    elite_count: int = 1
    selection: str = "roulette"
    tournament_k: int = 2
    max_generations: Optional[int] = None

    def __post_init__(self) -> None:
        if self.population_size < 1:
            raise ConfigError(f"population_size must be >= 1, got {self.population_size}")
        if not 0 <= self.elite_count < self.population_size:
            raise ConfigError(
                f"elite_count must be in [0, population_size), got {self.elite_count}"
            )
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ConfigError(f"crossover_prob must be in [0,1], got {self.crossover_prob}")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ConfigError(f"mutation_rate must be in [0,1], got {self.mutation_rate}")
        if self.selection not in SELECTION_METHODS:
            raise ConfigError(f"selection must be one of {SELECTION_METHODS}, got {self.selection!r}")
        if self.tournament_k < 1:
            raise ConfigError(f"tournament_k must be >= 1, got {self.tournament_k}")
        if self.max_generations is not None and self.max_generations < 1:
            raise ConfigError(f"max_generations must be >= 1, got {self.max_generations}")

    def to_dict(self) -> dict:
        return {
            "population_size": self.population_size,
            "crossover_prob": self.crossover_prob,
            "mutation_rate": self.mutation_rate,
            "elite_count": self.elite_count,
            "selection": self.selection,
            "tournament_k": self.tournament_k,
            "max_generations": self.max_generations,
        }

    @classmethod
    def from_dict(cls, d: dict) -> GaConfig:
        return cls(**d)


@dataclass(frozen=True)
class Population:
    """An ordered generation of genomes; index i sits in zone i+1."""

    generation: int
    members: tuple[Genome, ...]


def init_population(cfg: GaConfig, rng: random.Random) -> Population:
    """Generation 0: uniform random genomes."""
    return Population(
        generation=0,
        members=tuple(random_genome(rng) for _ in range(cfg.population_size)),
    )


def select_parent(fitness: EstimatedFitness, rng: random.Random) -> int:
    """Roulette selection: index drawn proportionally to fitness values.

    An all-zero vector falls back to a uniform draw.  Returns a 0-based
    member index.
    """
    total = sum(fitness.values)
    if total <= 0.0:
        return rng.randrange(len(fitness.values))
    pick = rng.random() * total
    acc = 0.0
    for i, v in enumerate(fitness.values):
        acc += v
        if pick < acc:
            return i
    return len(fitness.values) - 1  # guard against float round-off at the top


def select_parent_tournament(
    fitness: EstimatedFitness, rng: random.Random, k: int = 2
) -> int:
    """Tournament selection: best of k uniform draws, lowest index on ties."""
    n = len(fitness.values)
    best = rng.randrange(n)
    for _ in range(k - 1):
        challenger = rng.randrange(n)
        if fitness.values[challenger] > fitness.values[best] or (
            fitness.values[challenger] == fitness.values[best] and challenger < best
        ):
            best = challenger
    return best


def crossover(
    a: Genome, b: Genome, rng: random.Random, crossover_prob: float = 0.9
) -> tuple[Genome, Genome]:
    """Single-point crossover with the given probability, else clones.

    The cut point is uniform in 1..23 and the offspring swap suffixes.
    """
    if rng.random() >= crossover_prob:
        return a, b
    cut = rng.randint(1, GENOME_LENGTH - 1)
    return (
        Genome(a.bits[:cut] + b.bits[cut:]),
        Genome(b.bits[:cut] + a.bits[cut:]),
    )


def mutate(genome: Genome, rng: random.Random, mutation_rate: float = 1.0 / GENOME_LENGTH) -> Genome:
    """Flip each bit independently with ``mutation_rate``."""
    return Genome(tuple(1 - bit if rng.random() < mutation_rate else bit for bit in genome.bits))


def evolve_step(
    pop: Population, fitness: EstimatedFitness, cfg: GaConfig, rng: random.Random
) -> Population:
    """Produce the next generation from the estimated fitness.

    The ``elite_count`` best-estimated members (ties to the lower zone
    index) survive unchanged; the remainder comes from
    select -> crossover -> mutate.  The whole new generation is shuffled
    into zone slots.
    """
    n = len(pop.members)
    if len(fitness.values) != n:
        raise DimensionMismatchError(
            f"fitness has {len(fitness.values)} values for a population of {n}"
        )

    ranked = sorted(range(n), key=lambda i: (-fitness.values[i], i))
    next_members = [pop.members[i] for i in ranked[: cfg.elite_count]]

    if cfg.selection == "tournament":
        def pick() -> int:
            return select_parent_tournament(fitness, rng, cfg.tournament_k)
    else:
        def pick() -> int:
            return select_parent(fitness, rng)

    while len(next_members) < n:
        parent_a = pop.members[pick()]
        parent_b = pop.members[pick()]
        for child in crossover(parent_a, parent_b, rng, cfg.crossover_prob):
            if len(next_members) < n:
                next_members.append(mutate(child, rng, cfg.mutation_rate))

    rng.shuffle(next_members)
    return Population(generation=pop.generation + 1, members=tuple(next_members))
