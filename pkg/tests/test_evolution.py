"""Selection, crossover, mutation, and generation stepping."""

from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gazevolve.evolution import (
    ConfigError,
    DimensionMismatchError,
    GaConfig,
    Population,
    crossover,
    evolve_step,
    init_population,
    mutate,
    select_parent,
    select_parent_tournament,
)
from gazevolve.fitness import EstimatedFitness
from gazevolve.genome import Genome, brightness, decode_color, random_genome

ZEROS = Genome((0,) * 24)
ONES = Genome((1,) * 24)

genomes = st.builds(Genome, st.tuples(*([st.integers(0, 1)] * 24)))


def fitness_vector(*values):
    return EstimatedFitness(values=tuple(values))


class TestGaConfig:
    def test_defaults(self):
        cfg = GaConfig()
        assert cfg.population_size == 8
        assert cfg.crossover_prob == 0.9
        assert cfg.mutation_rate == pytest.approx(1 / 24)
        assert cfg.elite_count == 1
        assert cfg.selection == "roulette"

    def test_elite_must_be_smaller_than_population(self):
        with pytest.raises(ConfigError):
            GaConfig(population_size=4, elite_count=4)

    def test_probability_ranges(self):
        with pytest.raises(ConfigError):
            GaConfig(crossover_prob=1.5)
        with pytest.raises(ConfigError):
            GaConfig(mutation_rate=-0.1)

    def test_selection_name_checked(self):
        with pytest.raises(ConfigError):
            GaConfig(selection="rank")

    def test_dict_round_trip(self):
        cfg = GaConfig(crossover_prob=0.7, elite_count=2)
        assert GaConfig.from_dict(cfg.to_dict()) == cfg


class TestInitPopulation:
    def test_seeded_determinism(self):
        a = init_population(GaConfig(), random.Random(5))
        b = init_population(GaConfig(), random.Random(5))
        assert a == b

    def test_size_and_generation(self):
        pop = init_population(GaConfig(), random.Random(0))
        assert len(pop.members) == 8
        assert pop.generation == 0

    def test_mean_brightness_near_half_of_maximum(self):
        rng = random.Random(99)
        total = 0.0
        for _ in range(1000):
            pop = init_population(GaConfig(), rng)
            total += sum(brightness(decode_color(g)) for g in pop.members) / 8
        mean = total / 1000
        assert abs(mean - 382.5) < 5, f"mean brightness {mean} far from 382.5"


class TestSelectParent:
    def test_degenerate_mass(self):
        fit = fitness_vector(1, 0, 0, 0, 0, 0, 0, 0)
        rng = random.Random(1)
        assert all(select_parent(fit, rng) == 0 for _ in range(100))

    def test_uniform_values_draw_uniformly(self):
        fit = fitness_vector(*([0.125] * 8))
        rng = random.Random(7)
        counts = [0] * 8
        n = 10_000
        for _ in range(n):
            counts[select_parent(fit, rng)] += 1
        expected = n / 8
        sigma = (n * (1 / 8) * (7 / 8)) ** 0.5
        for i, c in enumerate(counts):
            assert abs(c - expected) < 3 * sigma, f"zone {i}: {c} draws vs expected {expected}"

    def test_all_zero_falls_back_to_uniform(self):
        fit = fitness_vector(*([0.0] * 8))
        rng = random.Random(13)
        counts = [0] * 8
        n = 10_000
        for _ in range(n):
            counts[select_parent(fit, rng)] += 1
        sigma = (n * (1 / 8) * (7 / 8)) ** 0.5
        for c in counts:
            assert abs(c - n / 8) < 3 * sigma

    def test_tournament_prefers_higher_fitness(self):
        fit = fitness_vector(0.9, 0.1, 0, 0, 0, 0, 0, 0)
        rng = random.Random(3)
        wins = sum(select_parent_tournament(fit, rng, k=2) == 0 for _ in range(10_000))
        # index 0 wins any tournament it enters: P = 1 - (7/8)^2
        assert abs(wins / 10_000 - (1 - (7 / 8) ** 2)) < 0.02


class TestCrossover:
    def test_suffix_swap_at_known_cut(self):
        # with seed 0 the first accepted draw cuts at a reproducible point;
        # force the cut by trying seeds until the cut lands at 8
        for seed in range(200):
            rng = random.Random(seed)
            if rng.random() < 1.0 and rng.randint(1, 23) == 8:
                rng = random.Random(seed)
                c1, c2 = crossover(ZEROS, ONES, rng, crossover_prob=1.0)
                assert c1 == Genome((0,) * 8 + (1,) * 16)
                assert c2 == Genome((1,) * 8 + (0,) * 16)
                return
        pytest.fail("no seed with cut point 8 found")

    def test_identical_parents_unaffected(self):
        rng = random.Random(2)
        g = random_genome(rng)
        c1, c2 = crossover(g, g, rng, crossover_prob=1.0)
        assert c1 == g and c2 == g

    def test_no_crossover_clones(self):
        c1, c2 = crossover(ZEROS, ONES, random.Random(0), crossover_prob=0.0)
        assert c1 == ZEROS and c2 == ONES

    @given(genomes, genomes, st.integers(0, 2**32))
    def test_per_position_allele_conservation(self, a, b, seed):
        c1, c2 = crossover(a, b, random.Random(seed), crossover_prob=1.0)
        for i in range(24):
            assert sorted((c1.bits[i], c2.bits[i])) == sorted((a.bits[i], b.bits[i]))


class TestMutate:
    def test_rate_zero_is_identity(self):
        g = random_genome(random.Random(4))
        assert mutate(g, random.Random(0), mutation_rate=0.0) == g

    def test_rate_one_is_complement(self):
        g = random_genome(random.Random(4))
        flipped = mutate(g, random.Random(0), mutation_rate=1.0)
        assert flipped == Genome(tuple(1 - b for b in g.bits))

    def test_mean_flip_count_at_default_rate(self):
        rng = random.Random(21)
        g = ZEROS
        total_flips = 0
        n = 10_000
        for _ in range(n):
            total_flips += mutate(g, rng, mutation_rate=1 / 24).ones_count()
        mean = total_flips / n
        assert abs(mean - 1.0) < 0.05, f"mean flips {mean} far from binomial expectation 1.0"


class TestEvolveStep:
    def test_elite_survives(self):
        rng = random.Random(10)
        pop = init_population(GaConfig(), rng)
        fit = fitness_vector(0.1, 0.1, 0.1, 0.9, 0.1, 0.1, 0.1, 0.1)
        nxt = evolve_step(pop, fit, GaConfig(), rng)
        assert pop.members[3] in nxt.members

    def test_degenerate_operators_copy_the_winner(self):
        cfg = GaConfig(mutation_rate=0.0, crossover_prob=0.0)
        rng = random.Random(11)
        pop = init_population(cfg, rng)
        fit = fitness_vector(0, 0, 0, 0, 0, 1, 0, 0)
        nxt = evolve_step(pop, fit, cfg, rng)
        assert nxt.members == (pop.members[5],) * 8

    def test_generation_counter_increments(self):
        rng = random.Random(12)
        pop = init_population(GaConfig(), rng)
        nxt = evolve_step(pop, fitness_vector(*([0.125] * 8)), GaConfig(), rng)
        assert nxt.generation == 1
        assert len(nxt.members) == 8

    def test_seeded_determinism(self):
        fit = fitness_vector(*([0.125] * 8))

        def run():
            rng = random.Random(33)
            pop = init_population(GaConfig(), rng)
            return evolve_step(pop, fit, GaConfig(), rng)

        assert run() == run()

    def test_dimension_mismatch_rejected(self):
        rng = random.Random(0)
        pop = Population(generation=0, members=tuple(random_genome(rng) for _ in range(4)))
        with pytest.raises(DimensionMismatchError):
            evolve_step(pop, fitness_vector(*([0.25] * 8)), GaConfig(population_size=4), rng)

    def test_elite_tie_breaks_to_lower_zone(self):
        cfg = GaConfig(mutation_rate=0.0, crossover_prob=0.0, elite_count=1)
        rng = random.Random(14)
        pop = init_population(cfg, rng)
        # ties everywhere: elite must be the zone-1 member; with degenerate
        # operators and uniform selection the elite is guaranteed present
        fit = fitness_vector(*([0.125] * 8))
        nxt = evolve_step(pop, fit, cfg, rng)
        assert pop.members[0] in nxt.members

    def test_tournament_selection_runs(self):
        cfg = GaConfig(selection="tournament")
        rng = random.Random(15)
        pop = init_population(cfg, rng)
        nxt = evolve_step(pop, fitness_vector(*([0.125] * 8)), cfg, rng)
        assert len(nxt.members) == 8
