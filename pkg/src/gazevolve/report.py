"""Tabular and graphical reports from a session log.

``write_report`` emits a per-generation CSV (best/mean brightness,
attention totals, choice, fatigue flag) and renders two figures next to
it: the brightness trend across generations, and the palette of colors
each generation presented -- the visual record of whether the population
actually drifted toward white.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")  # file output only; never require a display

import matplotlib.pyplot as plt
import numpy as np

from .genome import Genome, decode_color
from .runner import RunReport, _read_log

CSV_COLUMNS = (
    "generation",
    "best_m1",
    "mean_m1",
    "total_dwell_ms",
    "total_transitions",
    "chosen",
    "fatigued",
)


def write_csv(report: RunReport, path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in report.rows:
            writer.writerow({k: ("" if v is None else v) for k, v in row.to_dict().items()})
    return path


def plot_brightness_trend(report: RunReport, path: str | Path) -> Path:
    path = Path(path)
    generations = [row.generation for row in report.rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(generations, [row.best_m1 for row in report.rows], marker="o", label="best")
    ax.plot(generations, [row.mean_m1 for row in report.rows], marker="s", label="mean")
    ax.set_xlabel("generation")
    ax.set_ylabel("brightness (R+G+B)")
    ax.set_ylim(0, 765)
    ax.set_title("Population brightness per generation")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_palette(log_path: str | Path, path: str | Path) -> Path:
    """One row of 8 swatches per presented generation, oldest at the top."""
    path = Path(path)
    palettes = []
    for _, record in _read_log(log_path):
        if record["type"] != "present":
            continue
        row = [decode_color(Genome.from_string(ind["genome"])) for ind in record["individuals"]]
        palettes.append([(c.r, c.g, c.b) for c in row])
    if not palettes:
        raise ValueError(f"{log_path}: no presentations to plot")

    grid = np.array(palettes, dtype=np.uint8)
    fig, ax = plt.subplots(figsize=(4, max(2, 0.35 * len(palettes))))
    ax.imshow(grid, aspect="auto", interpolation="nearest")
    ax.set_xlabel("zone")
    ax.set_ylabel("generation")
    ax.set_xticks(range(8), [str(z) for z in range(1, 9)])
    ax.set_title("Presented colors")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def write_report(
    report: RunReport, log_path: str | Path, csv_path: str | Path, fig_dir: str | Path | None = None
) -> dict[str, Path]:
    """Write the CSV plus both figures; returns the produced paths."""
    csv_path = Path(csv_path)
    fig_dir = Path(fig_dir) if fig_dir is not None else csv_path.parent
    fig_dir.mkdir(parents=True, exist_ok=True)
    stem = csv_path.stem
    produced = {
        "csv": write_csv(report, csv_path),
        "brightness_fig": plot_brightness_trend(report, fig_dir / f"{stem}_brightness.png"),
        "palette_fig": plot_palette(log_path, fig_dir / f"{stem}_palette.png"),
    }
    return produced
