"""Screen zones, gaze-sample aggregation, and the fatigue heuristic.

The display is a 3x3 grid of equal cells over normalized [0,1]^2
coordinates.  The center cell is deliberately left empty (eyes are drawn
to the center, and crossing gazes would pollute whatever sat there); the
8 surrounding cells each show one individual.  Zone rectangles are the
cells shrunk by a small gap margin so neighbouring zones never touch and
a sample on a boundary is unambiguous.

Aggregation turns a timestamped stream of gaze samples into three
per-zone attention statistics:

* dwell ``d`` -- milliseconds of gaze inside the zone (sample-and-hold:
  the interval between consecutive samples belongs to the earlier
  sample's zone; the final sample closes no interval),
* transitions ``t`` -- entries into the zone from any different label,
  including the first look of the stream,
* pupil ``p`` -- dwell-weighted mean pupil diameter, absent when the
  stream carries no pupil data.

The fatigue check compares a generation's attention totals against the
trailing mean of recent generations; a sharp drop on either axis is a
hint that the user is tiring and a pause may be in order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

ZONE_COUNT = 8
DEFAULT_GAP_FRACTION = 0.05
FATIGUE_THRESHOLD = 0.5
FATIGUE_WINDOW = 3


class OutOfBoundsError(ValueError):
    """Raised for gaze coordinates outside the normalized [0,1]^2 screen."""


class UnsortedStreamError(ValueError):
    """Raised when gaze samples are not in timestamp order."""


@dataclass(frozen=True)
class GazeSample:
    """One gaze observation: time in ms, normalized position, optional pupil."""

    t_ms: float
    x: float
    y: float
    pupil_mm: Optional[float] = None

    def __post_init__(self) -> None:
        if not (0.0 <= self.x <= 1.0 and 0.0 <= self.y <= 1.0):
            raise OutOfBoundsError(f"gaze position ({self.x}, {self.y}) outside [0,1]^2")
        if self.pupil_mm is not None and self.pupil_mm <= 0:
            raise ValueError(f"pupil_mm must be positive, got {self.pupil_mm}")

    def to_record(self) -> dict:
        """One-line JSON form: {"t_ms": int, "x": float, "y": float, "pupil_mm": float|null}."""
        return {
            "t_ms": int(self.t_ms),
            "x": self.x,
            "y": self.y,
            "pupil_mm": self.pupil_mm,
        }

    @classmethod
    def from_record(cls, record: dict) -> GazeSample:
        return cls(
            t_ms=float(record["t_ms"]),
            x=float(record["x"]),
            y=float(record["y"]),
            pupil_mm=None if record.get("pupil_mm") is None else float(record["pupil_mm"]),
        )


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle in normalized coordinates, closed on all sides."""

    x0: float
    y0: float
    x1: float
    y1: float

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1

    def center(self) -> tuple[float, float]:
        return (self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0

    def intersects(self, other: Rect) -> bool:
        return not (
            self.x1 < other.x0 or other.x1 < self.x0 or self.y1 < other.y0 or other.y1 < self.y0
        )


@dataclass(frozen=True)
class ZoneLayout:
    """Eight disjoint zone rectangles around an empty center region."""

    zones: tuple[Rect, ...]
    center_exclusion: Rect

    def __post_init__(self) -> None:
        if len(self.zones) != ZONE_COUNT:
            raise ValueError(f"layout must have {ZONE_COUNT} zones, got {len(self.zones)}")
        for i, a in enumerate(self.zones):
            if a.intersects(self.center_exclusion):
                raise ValueError(f"zone {i + 1} intersects the center exclusion")
            for j in range(i + 1, ZONE_COUNT):
                if a.intersects(self.zones[j]):
                    raise ValueError(f"zones {i + 1} and {j + 1} overlap")


def default_layout(gap_fraction: float = DEFAULT_GAP_FRACTION) -> ZoneLayout:
    """3x3 grid of equal cells with the center cell excluded.

    The 8 surrounding cells become zones, shrunk by ``gap_fraction`` of the
    cell size on each side, ordered row-major skipping the center.
    """
    third = 1.0 / 3.0
    margin = gap_fraction * third
    zones = []
    for row in range(3):
        for col in range(3):
            if row == 1 and col == 1:
                continue
            zones.append(
                Rect(
                    x0=col * third + margin,
                    y0=row * third + margin,
                    x1=(col + 1) * third - margin,
                    y1=(row + 1) * third - margin,
                )
            )
    center = Rect(third, third, 2 * third, 2 * third)
    return ZoneLayout(zones=tuple(zones), center_exclusion=center)


def zone_at(layout: ZoneLayout, x: float, y: float) -> Optional[int]:
    """Zone id (1..8) containing the point, or None for center/gaps.

    Raises ``OutOfBoundsError`` for points outside [0,1]^2.
    """
    if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
        raise OutOfBoundsError(f"point ({x}, {y}) outside [0,1]^2")
    for i, zone in enumerate(layout.zones):
        if zone.contains(x, y):
            return i + 1
    return None


@dataclass(frozen=True)
class ZoneStats:
    """Per-zone attention aggregates: dwell ms, transition counts, pupil means."""

    dwell_ms: tuple[float, ...]
    transitions: tuple[int, ...]
    pupil_mm: tuple[Optional[float], ...]

    def __post_init__(self) -> None:
        if not (len(self.dwell_ms) == len(self.transitions) == len(self.pupil_mm) == ZONE_COUNT):
            raise ValueError(f"zone stats must cover exactly {ZONE_COUNT} zones")

    def total_dwell_ms(self) -> float:
        return sum(self.dwell_ms)

    def total_transitions(self) -> int:
        return sum(self.transitions)


def empty_stats() -> ZoneStats:
    return ZoneStats(
        dwell_ms=(0.0,) * ZONE_COUNT,
        transitions=(0,) * ZONE_COUNT,
        pupil_mm=(None,) * ZONE_COUNT,
    )


_STREAM_START = object()


def aggregate(layout: ZoneLayout, samples: Sequence[GazeSample]) -> ZoneStats:
    """Reduce an ordered gaze stream to per-zone attention statistics.

    Samples must be sorted by ``t_ms`` (equal timestamps allowed; the
    interval is then empty).  An empty stream yields all-zero stats.
    """
    dwell = [0.0] * ZONE_COUNT
    transitions = [0] * ZONE_COUNT
    pupil_weighted = [0.0] * ZONE_COUNT
    pupil_weight = [0.0] * ZONE_COUNT

    labels: list[Optional[int]] = []
    last_t: Optional[float] = None
    for sample in samples:
        if last_t is not None and sample.t_ms < last_t:
            raise UnsortedStreamError(
                f"gaze stream not sorted: t_ms {sample.t_ms} after {last_t}"
            )
        last_t = sample.t_ms
        labels.append(zone_at(layout, sample.x, sample.y))

    prev_label: object = _STREAM_START
    for label in labels:
        if label is not None and label != prev_label:
            transitions[label - 1] += 1
        prev_label = label

    for k in range(len(samples) - 1):
        label = labels[k]
        if label is None:
            continue
        dt = samples[k + 1].t_ms - samples[k].t_ms
        dwell[label - 1] += dt
        if samples[k].pupil_mm is not None:
            pupil_weighted[label - 1] += samples[k].pupil_mm * dt
            pupil_weight[label - 1] += dt

    pupil = tuple(
        pupil_weighted[j] / pupil_weight[j] if pupil_weight[j] > 0 else None
        for j in range(ZONE_COUNT)
    )
    return ZoneStats(dwell_ms=tuple(dwell), transitions=tuple(transitions), pupil_mm=pupil)


@dataclass(frozen=True)
class FatigueSignal:
    """Outcome of the attention-drop check for one generation."""

    fatigued: bool
    transition_ratio: float
    dwell_ratio: float


def fatigue_check(
    history: Sequence[tuple[float, float]],
    current: tuple[float, float],
    threshold: float = FATIGUE_THRESHOLD,
    window: int = FATIGUE_WINDOW,
) -> FatigueSignal:
    """Flag a sharp drop in attention totals versus recent generations.

    ``history`` holds per-generation (total transitions, total dwell ms)
    pairs, oldest first; ``current`` is the generation under test.  Each
    ratio is current over the trailing mean of the last ``window``
    generations; a zero baseline yields a neutral ratio of 1.0.  The signal
    fires when either ratio falls below ``threshold``.
    """
    if not history:
        raise ValueError("fatigue_check needs at least one generation of history")
    tail = history[-min(window, len(history)) :]
    mean_t = sum(t for t, _ in tail) / len(tail)
    mean_d = sum(d for _, d in tail) / len(tail)
    transition_ratio = current[0] / mean_t if mean_t > 0 else 1.0
    dwell_ratio = current[1] / mean_d if mean_d > 0 else 1.0
    return FatigueSignal(
        fatigued=transition_ratio < threshold or dwell_ratio < threshold,
        transition_ratio=transition_ratio,
        dwell_ratio=dwell_ratio,
    )
