"""Session state machine, wire protocol, and append-only logging.

A session drives the interactive loop: present 8 colors, collect gaze
samples while the user watches, accept an optional click, and on "done"
turn the collected attention into estimated fitness, check for fatigue,
evolve, and present the next generation.

Message protocol (JSON objects):

inbound   {"type":"gaze","t_ms":int,"x":float,"y":float,"pupil_mm":float|null}
          {"type":"choose","zone":1..8}
          {"type":"done"}
          {"type":"end"}
outbound  {"type":"present","generation":int,"individuals":[{"zone","rgb","genome"}]}
          {"type":"fitness","generation":int,"values":[8 floats],"chosen":int|null}
          {"type":"fatigue_warning","transition_ratio":float,"dwell_ratio":float}
          {"type":"error","code":str,"detail":str}

Phases run Collecting -> Evolved -> Collecting ... -> Ended.  After a
"done" the session sits in Evolved until the transport confirms the new
presentation went out (``confirm_presentation``); gaze arriving before
that confirmation is a protocol error.  A malformed payload gets a
parse_error, a message in the wrong phase a protocol_error; either way
the session state is untouched.

The session log is JSONL, one timestamped record per line, mirroring the
message stream plus a leading config record and per-generation fitness
and fatigue records.  Together with the recorded seed it replays to
bit-identical fitness vectors and populations.
"""

from __future__ import annotations

import enum
import json
import random
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Optional

from .evolution import ConfigError, GaConfig, Population, evolve_step, init_population
from .fitness import EstimatedFitness, normalized_fitness
from .gaze import (
    FATIGUE_THRESHOLD,
    ZONE_COUNT,
    FatigueSignal,
    GazeSample,
    ZoneLayout,
    ZoneStats,
    aggregate,
    default_layout,
    fatigue_check,
)
from .genome import Genome, decode_color

ERROR_PARSE = "parse_error"
ERROR_PROTOCOL = "protocol_error"


class Phase(str, enum.Enum):
    PRESENTING = "presenting"
    COLLECTING = "collecting"
    EVOLVED = "evolved"
    ENDED = "ended"


class PhaseError(RuntimeError):
    """Raised when an engine-side transition is attempted in the wrong phase."""


@dataclass(frozen=True)
class GenerationRecord:
    """Everything the engine derived from one evaluated generation."""

    generation: int
    stats: ZoneStats
    fitness: EstimatedFitness
    chosen: Optional[int]
    fatigue: Optional[FatigueSignal]


@dataclass
class SessionState:
    phase: Phase
    cfg: GaConfig
    layout: ZoneLayout
    fatigue_threshold: float
    seed: int
    rng: random.Random
    population: Population
    samples: list[GazeSample] = field(default_factory=list)
    chosen: Optional[int] = None
    history: list[GenerationRecord] = field(default_factory=list)
    last_t_ms: Optional[float] = None


def create_session(
    cfg: GaConfig,
    layout: Optional[ZoneLayout] = None,
    seed: int = 0,
    fatigue_threshold: float = FATIGUE_THRESHOLD,
) -> SessionState:
    """Start a session: generation-0 population presented, collecting gaze."""
    layout = layout if layout is not None else default_layout()
    if cfg.population_size != len(layout.zones):
        raise ConfigError(
            f"population_size ({cfg.population_size}) must equal the zone count "
            f"({len(layout.zones)})"
        )
    rng = random.Random(seed)
    state = SessionState(
        phase=Phase.PRESENTING,
        cfg=cfg,
        layout=layout,
        fatigue_threshold=fatigue_threshold,
        seed=seed,
        rng=rng,
        population=init_population(cfg, rng),
    )
    state.phase = Phase.COLLECTING  # generation 0 is presented on creation
    return state


def present_message(state: SessionState) -> dict:
    """The presentation of the current population, one individual per zone."""
    individuals = []
    for i, genome in enumerate(state.population.members):
        color = decode_color(genome)
        individuals.append(
            {"zone": i + 1, "rgb": [color.r, color.g, color.b], "genome": genome.to_string()}
        )
    return {
        "type": "present",
        "generation": state.population.generation,
        "individuals": individuals,
    }


def fitness_message(record: GenerationRecord) -> dict:
    return {
        "type": "fitness",
        "generation": record.generation,
        "values": list(record.fitness.values),
        "chosen": record.chosen,
    }


def fatigue_warning_message(signal: FatigueSignal) -> dict:
    return {
        "type": "fatigue_warning",
        "transition_ratio": signal.transition_ratio,
        "dwell_ratio": signal.dwell_ratio,
    }


def _error(code: str, detail: str) -> list[dict]:
    return [{"type": "error", "code": code, "detail": detail}]


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def handle_message(state: SessionState, msg: object) -> list[dict]:
    """Apply one inbound message; returns the outbound messages.

    The state is mutated in place (a session has a single logical writer).
    On any error the state is left unchanged and a single error message is
    returned.
    """
    if not isinstance(msg, dict) or not isinstance(msg.get("type"), str):
        return _error(ERROR_PARSE, "message must be a JSON object with a string 'type'")
    kind = msg["type"]

    if kind == "gaze":
        if state.phase is not Phase.COLLECTING:
            return _error(ERROR_PROTOCOL, f"gaze not accepted in phase {state.phase.value}")
        if not all(_is_number(msg.get(k)) for k in ("t_ms", "x", "y")):
            return _error(ERROR_PARSE, "gaze requires numeric t_ms, x, y")
        pupil = msg.get("pupil_mm")
        if pupil is not None and not _is_number(pupil):
            return _error(ERROR_PARSE, "pupil_mm must be a number or null")
        try:
            sample = GazeSample(
                t_ms=float(msg["t_ms"]), x=float(msg["x"]), y=float(msg["y"]),
                pupil_mm=None if pupil is None else float(pupil),
            )
        except ValueError as exc:
            return _error(ERROR_PARSE, str(exc))
        if state.last_t_ms is not None and sample.t_ms < state.last_t_ms:
            return _error(
                ERROR_PARSE,
                f"gaze timestamps must be non-decreasing ({sample.t_ms} after {state.last_t_ms})",
            )
        state.samples.append(sample)
        state.last_t_ms = sample.t_ms
        return []

    if kind == "choose":
        if state.phase is not Phase.COLLECTING:
            return _error(ERROR_PROTOCOL, f"choose not accepted in phase {state.phase.value}")
        zone = msg.get("zone")
        if type(zone) is not int or not 1 <= zone <= ZONE_COUNT:
            return _error(ERROR_PARSE, f"choose requires an integer zone in 1..{ZONE_COUNT}")
        state.chosen = zone  # latest choice wins
        return []

    if kind == "done":
        if state.phase is not Phase.COLLECTING:
            return _error(ERROR_PROTOCOL, f"done not accepted in phase {state.phase.value}")
        return _finish_generation(state)

    if kind == "end":
        if state.phase is Phase.ENDED:
            return _error(ERROR_PROTOCOL, "session already ended")
        state.phase = Phase.ENDED
        return []

    return _error(ERROR_PARSE, f"unknown message type {kind!r}")


def _finish_generation(state: SessionState) -> list[dict]:
    stats = aggregate(state.layout, state.samples)
    fitness = normalized_fitness(stats, state.chosen)
    totals = [(r.stats.total_transitions(), r.stats.total_dwell_ms()) for r in state.history]
    fatigue = (
        fatigue_check(
            totals,
            (stats.total_transitions(), stats.total_dwell_ms()),
            threshold=state.fatigue_threshold,
        )
        if totals
        else None
    )
    record = GenerationRecord(
        generation=state.population.generation,
        stats=stats,
        fitness=fitness,
        chosen=state.chosen,
        fatigue=fatigue,
    )
    state.history.append(record)
    state.population = evolve_step(state.population, fitness, state.cfg, state.rng)
    state.samples = []
    state.chosen = None
    state.last_t_ms = None
    state.phase = Phase.EVOLVED

    outbound = [fitness_message(record)]
    if fatigue is not None and fatigue.fatigued:
        outbound.append(fatigue_warning_message(fatigue))
    outbound.append(present_message(state))
    return outbound


def confirm_presentation(state: SessionState) -> None:
    """Resume collecting once the transport has delivered the presentation."""
    if state.phase is not Phase.EVOLVED:
        raise PhaseError(f"no presentation pending in phase {state.phase.value}")
    state.phase = Phase.COLLECTING


# ----------------------------------------------------------------------
# Session log (JSONL)
# ----------------------------------------------------------------------


def config_record(state: SessionState) -> dict:
    return {
        "type": "config",
        "seed": state.seed,
        "ga": state.cfg.to_dict(),
        "fatigue_threshold": state.fatigue_threshold,
    }


def fatigue_record(generation: int, signal: FatigueSignal) -> dict:
    return {
        "type": "fatigue",
        "generation": generation,
        "fatigued": signal.fatigued,
        "transition_ratio": signal.transition_ratio,
        "dwell_ratio": signal.dwell_ratio,
    }


class SessionLogWriter:
    """Appends timestamped JSON records, one per line, flushed per record."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._fh: IO[str] = open(self.path, "w", encoding="utf-8")

    def write(self, record: dict) -> None:
        stamped = {"ts": time.time(), **record}
        self._fh.write(json.dumps(stamped, sort_keys=True, separators=(",", ":")) + "\n")
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> SessionLogWriter:
        return self

    def __exit__(self, *exc) -> None:
        self.close()
