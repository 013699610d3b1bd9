"""Headless runs against a simulated user, and log replay.

``run_headless`` drives the full loop -- simulate gaze, simulate a click,
finish the generation, repeat -- through the same message handler a live
client would use, so a headless session log is indistinguishable from a
live one.  One master seed derives independent streams for the session
RNG (logged, so replay can reproduce evolution) and the user RNG (not
needed for replay: the user's behaviour is what the log records).

``replay`` re-runs a log's message sequence from its recorded seed and
compares every recomputed fitness vector and presentation against the
logged ones.  Structural damage (unparseable or out-of-place records,
truncation) raises ``LogIntegrityError`` naming the first bad line;
value-level disagreement is collected as divergences in the report.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .evolution import GaConfig, Population
from .gaze import FATIGUE_THRESHOLD, GazeSample, ZoneLayout, aggregate, default_layout
from .genome import Genome, brightness, decode_color
from .session import (
    SessionLogWriter,
    SessionState,
    config_record,
    confirm_presentation,
    create_session,
    fatigue_record,
    handle_message,
    present_message,
)
from .simuser import UserModel, simulate_choice, simulate_gaze


class LogIntegrityError(ValueError):
    """Raised when a session log is structurally unusable."""


@dataclass(frozen=True)
class GenerationSummary:
    """One row of a run report."""

    generation: int
    best_m1: float
    mean_m1: float
    total_dwell_ms: Optional[float] = None
    total_transitions: Optional[int] = None
    chosen: Optional[int] = None
    fatigued: Optional[bool] = None

    def to_dict(self) -> dict:
        return {
            "generation": self.generation,
            "best_m1": self.best_m1,
            "mean_m1": self.mean_m1,
            "total_dwell_ms": self.total_dwell_ms,
            "total_transitions": self.total_transitions,
            "chosen": self.chosen,
            "fatigued": self.fatigued,
        }


@dataclass(frozen=True)
class RunReport:
    seed: Optional[int]
    rows: tuple[GenerationSummary, ...]
    divergences: tuple[str, ...] = ()
    log_path: Optional[str] = field(default=None, compare=False)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "rows": [row.to_dict() for row in self.rows],
            "divergences": list(self.divergences),
            "log_path": self.log_path,
        }


def _population_m1(pop: Population) -> tuple[float, float]:
    values = [brightness(decode_color(g)) for g in pop.members]
    return max(values), sum(values) / len(values)


def _summary_row(pop: Population, record=None) -> GenerationSummary:
    best, mean = _population_m1(pop)
    if record is None:
        return GenerationSummary(generation=pop.generation, best_m1=best, mean_m1=mean)
    return GenerationSummary(
        generation=pop.generation,
        best_m1=best,
        mean_m1=mean,
        total_dwell_ms=record.stats.total_dwell_ms(),
        total_transitions=record.stats.total_transitions(),
        chosen=record.chosen,
        fatigued=record.fatigue.fatigued if record.fatigue is not None else None,
    )


def run_headless(
    cfg: GaConfig,
    model: UserModel,
    generations: int,
    seed: int,
    log_path: Optional[str | Path] = None,
    layout: Optional[ZoneLayout] = None,
    fatigue_threshold: float = FATIGUE_THRESHOLD,
) -> RunReport:
    """Run the full loop for ``generations`` evaluated generations.

    Returns a report with one row per presented population (so
    ``generations + 1`` rows, the last being the final unevaluated one)
    and, when ``log_path`` is given, writes a replayable session log.
    """
    if generations < 1:
        raise ValueError(f"generations must be >= 1, got {generations}")
    master = random.Random(seed)
    session_seed = master.getrandbits(64)
    user_seed = master.getrandbits(64)
    user_rng = random.Random(user_seed)

    state = create_session(cfg, layout, session_seed, fatigue_threshold)
    writer = SessionLogWriter(log_path) if log_path is not None else None
    rows: list[GenerationSummary] = []
    try:
        if writer:
            writer.write(config_record(state))
            writer.write(present_message(state))
        for _ in range(generations):
            pop = state.population
            for sample in simulate_gaze(pop, state.layout, model, user_rng):
                msg = {"type": "gaze", **sample.to_record()}
                _drive(state, msg, writer)
            choice = simulate_choice(pop, model, user_rng)
            if choice is not None:
                _drive(state, {"type": "choose", "zone": choice}, writer)
            outbound = _drive(state, {"type": "done"}, writer)
            record = state.history[-1]
            rows.append(_summary_row(pop, record))
            if writer:
                for out in outbound:
                    if out["type"] == "fitness":
                        writer.write(out)
                        if record.fatigue is not None:
                            writer.write(fatigue_record(record.generation, record.fatigue))
                    elif out["type"] == "present":
                        writer.write(out)
            confirm_presentation(state)
        rows.append(_summary_row(state.population))
        _drive(state, {"type": "end"}, writer)
    finally:
        if writer:
            writer.close()
    return RunReport(
        seed=seed,
        rows=tuple(rows),
        divergences=(),
        log_path=str(log_path) if log_path is not None else None,
    )


def _drive(state: SessionState, msg: dict, writer: Optional[SessionLogWriter]) -> list[dict]:
    outbound = handle_message(state, msg)
    for out in outbound:
        if out["type"] == "error":
            raise RuntimeError(f"simulated message rejected: {out['detail']}")
    if writer:
        writer.write(msg)
    return outbound


# ----------------------------------------------------------------------
# Replay
# ----------------------------------------------------------------------


def _read_log(path: str | Path) -> list[tuple[int, dict]]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    records = []
    for n, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise LogIntegrityError(f"line {n}: not valid JSON ({exc.msg})") from exc
        if not isinstance(record, dict) or not isinstance(record.get("type"), str):
            raise LogIntegrityError(f"line {n}: record must be an object with a 'type'")
        records.append((n, record))
    if not records:
        raise LogIntegrityError("empty log")
    return records


def _strip(record: dict) -> dict:
    return {k: v for k, v in record.items() if k != "ts"}


def replay(log_path: str | Path) -> RunReport:
    """Recompute a logged session from its seed and flag any divergence."""
    records = _read_log(log_path)

    n0, head = records[0]
    if head["type"] != "config" or "seed" not in head or "ga" not in head:
        raise LogIntegrityError(f"line {n0}: first record must be a config with seed and ga")
    try:
        cfg = GaConfig.from_dict(head["ga"])
    except (TypeError, ValueError) as exc:
        raise LogIntegrityError(f"line {n0}: bad ga config ({exc})") from exc
    state = create_session(
        cfg,
        seed=head["seed"],
        fatigue_threshold=head.get("fatigue_threshold", FATIGUE_THRESHOLD),
    )

    divergences: list[str] = []
    populations: list[Population] = [state.population]
    # After a done, the log must contain fitness [, fatigue], present, in order.
    expected: list[dict] = [present_message(state)]

    for n, record in records[1:]:
        kind = record["type"]
        if expected:
            want = expected[0]
            if kind != want["type"]:
                raise LogIntegrityError(
                    f"line {n}: expected a {want['type']} record, found {kind}"
                )
            expected.pop(0)
            got = _strip(record)
            if got != want:
                generation = record.get("generation", "?")
                divergences.append(
                    f"generation {generation}: logged {kind} differs from recomputation (line {n})"
                )
            if kind == "present" and state.phase.value == "evolved":
                confirm_presentation(state)
            continue

        if kind in ("gaze", "choose", "done", "end"):
            outbound = handle_message(state, _strip(record))
            for out in outbound:
                if out["type"] == "error":
                    raise LogIntegrityError(f"line {n}: logged message rejected ({out['detail']})")
            if kind == "done":
                last = state.history[-1]
                expected.append(
                    {
                        "type": "fitness",
                        "generation": last.generation,
                        "values": list(last.fitness.values),
                        "chosen": last.chosen,
                    }
                )
                if last.fatigue is not None:
                    expected.append(_strip(fatigue_record(last.generation, last.fatigue)))
                expected.append(present_message(state))
                populations.append(state.population)
            continue

        raise LogIntegrityError(f"line {n}: unexpected record type {kind!r}")

    if expected:
        raise LogIntegrityError(
            f"log truncated: missing {expected[0]['type']} record at end of file"
        )

    rows = [
        _summary_row(pop, state.history[g] if g < len(state.history) else None)
        for g, pop in enumerate(populations)
    ]
    return RunReport(
        seed=head["seed"],
        rows=tuple(rows),
        divergences=tuple(divergences),
        log_path=str(log_path),
    )


def summarize_log(log_path: str | Path) -> RunReport:
    """Tabulate a log without recomputing: per-generation stats as recorded.

    Unlike ``replay`` this never touches the RNG and tolerates logs that
    stop mid-generation, which makes it the right backend for reporting.
    """
    records = _read_log(log_path)
    layout = default_layout()
    seed: Optional[int] = None
    rows: list[GenerationSummary] = []
    current: Optional[dict] = None  # row under construction
    samples: list[GazeSample] = []

    def flush() -> None:
        nonlocal current
        if current is not None:
            rows.append(GenerationSummary(**current))
            current = None

    for _, record in records:
        kind = record["type"]
        if kind == "config":
            seed = record.get("seed")
        elif kind == "present":
            flush()
            genomes = [Genome.from_string(ind["genome"]) for ind in record["individuals"]]
            values = [brightness(decode_color(g)) for g in genomes]
            current = {
                "generation": record["generation"],
                "best_m1": max(values),
                "mean_m1": sum(values) / len(values),
                "total_dwell_ms": None,
                "total_transitions": None,
                "chosen": None,
                "fatigued": None,
            }
            samples = []
        elif current is None:
            continue
        elif kind == "gaze":
            samples.append(GazeSample.from_record(record))
        elif kind == "choose":
            current["chosen"] = record["zone"]
        elif kind == "done":
            stats = aggregate(layout, samples)
            current["total_dwell_ms"] = stats.total_dwell_ms()
            current["total_transitions"] = stats.total_transitions()
            samples = []
        elif kind == "fatigue":
            current["fatigued"] = record["fatigued"]
    flush()

    return RunReport(seed=seed, rows=tuple(rows), divergences=(), log_path=str(log_path))
