"""Bitstring genomes, color decoding, and objective color metrics.

An individual is a string of 24 bits interpreted as an RGB color: the
first 8 bits are the red channel (most-significant bit first), the next
8 green, the last 8 blue.  The bit layout is a convention of this
package; it matters because single-point crossover cuts the string at
bit boundaries, so channel bytes stay contiguous.

Three objective metrics grade a color against the all-white optimum:

* ``brightness`` -- channel sum R+G+B,
* ``whiteness``  -- 255*sqrt(3) minus the Euclidean distance to white,
* ``min_channel`` -- the darkest channel.

``fdc`` measures how well each metric tracks the underlying bitstring
objective by correlating metric values with the Hamming distance to the
all-ones genome over uniform random samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

GENOME_LENGTH = 24
_CHANNEL_WEIGHTS = (128, 64, 32, 16, 8, 4, 2, 1)

# 255 * sqrt(3), the whiteness score of pure white
WHITENESS_MAX = 255.0 * math.sqrt(3.0)


class UndefinedCorrelationError(ValueError):
    """Raised when a correlation is requested over a zero-variance sample."""


class RgbColor(NamedTuple):
    r: int
    g: int
    b: int


@dataclass(frozen=True)
class Genome:
    """An immutable string of 24 bits, each 0 or 1."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.bits) != GENOME_LENGTH:
            raise ValueError(f"genome must have {GENOME_LENGTH} bits, got {len(self.bits)}")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("genome bits must be 0 or 1")

    @classmethod
    def from_string(cls, s: str) -> Genome:
        """Parse a genome from a 24-character string of '0'/'1'."""
        if len(s) != GENOME_LENGTH or set(s) - {"0", "1"}:
            raise ValueError(f"expected a {GENOME_LENGTH}-char bitstring, got {s!r}")
        return cls(tuple(int(c) for c in s))

    def to_string(self) -> str:
        return "".join(str(b) for b in self.bits)

    def ones_count(self) -> int:
        return sum(self.bits)


def decode_color(genome: Genome) -> RgbColor:
    """Decode a genome into its RGB color (8 bits per channel, MSB first)."""
    channels = []
    for start in (0, 8, 16):
        value = 0
        for weight, bit in zip(_CHANNEL_WEIGHTS, genome.bits[start : start + 8]):
            value += weight * bit
        channels.append(value)
    return RgbColor(*channels)


def brightness(color: RgbColor) -> float:
    """Channel sum R+G+B, in [0, 765]."""
    return float(color.r + color.g + color.b)


def whiteness(color: RgbColor) -> float:
    """255*sqrt(3) minus the Euclidean distance to white, in [0, 255*sqrt(3)]."""
    d = math.sqrt((255 - color.r) ** 2 + (255 - color.g) ** 2 + (255 - color.b) ** 2)
    return WHITENESS_MAX - d


def min_channel(color: RgbColor) -> float:
    """The darkest channel, min(R, G, B)."""
    return float(min(color.r, color.g, color.b))


#: Public metric identifiers, as accepted by the CLI.
METRICS: dict[str, Callable[[RgbColor], float]] = {
    "m1": brightness,
    "m2": whiteness,
    "ms": min_channel,
}


def hamming_to_white(genome: Genome) -> int:
    """Hamming distance to the all-ones genome, i.e. the count of zero bits."""
    return GENOME_LENGTH - genome.ones_count()


def random_genome(rng) -> Genome:
    """Draw a genome with each bit independently uniform, using ``rng``.

    ``rng`` is a ``random.Random`` instance; all engine randomness is
    threaded through explicit generators so runs are reproducible.
    """
    return Genome(tuple(rng.getrandbits(1) for _ in range(GENOME_LENGTH)))


@dataclass(frozen=True)
class FdcReport:
    """Result of a fitness-distance-correlation estimate."""

    metric_name: str
    sample_count: int
    correlation: float
    seed: int

    def to_dict(self) -> dict:
        return {
            "metric_name": self.metric_name,
            "sample_count": self.sample_count,
            "correlation": self.correlation,
            "seed": self.seed,
        }


def fdc_closed_form_m1() -> float:
    """Exact correlation between brightness and distance-to-white.

    For independent uniform bits with channel weights w, the Pearson
    coefficient is -sum(w) / sqrt(24 * sum(w^2)); brightness is the only
    metric linear in the bits, so only m1 has a closed form.
    """
    w = np.array(_CHANNEL_WEIGHTS * 3, dtype=float)
    return float(-w.sum() / math.sqrt(GENOME_LENGTH * (w**2).sum()))


def fdc(metric: str, n: int, seed: int) -> FdcReport:
    """Estimate the fitness-distance correlation of a color metric.

    Draws ``n`` uniform random genomes and returns the Pearson correlation
    between ``metric`` of the decoded color and the Hamming distance to the
    all-ones genome.  Fixed ``seed`` gives a bit-reproducible estimate.

    Raises ``UndefinedCorrelationError`` if either sample is constant and
    ``ValueError`` for an unknown metric or ``n < 2``.
    """
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {sorted(METRICS)}")
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")

    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(n, GENOME_LENGTH))
    w8 = np.array(_CHANNEL_WEIGHTS, dtype=float)
    r = bits[:, 0:8] @ w8
    g = bits[:, 8:16] @ w8
    b = bits[:, 16:24] @ w8
    if metric == "m1":
        values = r + g + b
    elif metric == "m2":
        values = WHITENESS_MAX - np.sqrt((255 - r) ** 2 + (255 - g) ** 2 + (255 - b) ** 2)
    else:
        values = np.minimum(np.minimum(r, g), b)
    distances = GENOME_LENGTH - bits.sum(axis=1)

    if np.ptp(values) == 0 or np.ptp(distances) == 0:
        raise UndefinedCorrelationError(
            f"correlation undefined: zero variance in {'metric' if np.ptp(values) == 0 else 'distance'} "
            f"sample (metric={metric}, n={n}, seed={seed})"
        )
    correlation = float(np.corrcoef(values, distances)[0, 1])
    return FdcReport(metric_name=metric, sample_count=n, correlation=correlation, seed=seed)
