"""CLI subcommands: simulate, fdc, replay, report (serve is covered live in test_server)."""

from __future__ import annotations

import csv
import json

import pytest

from gazevolve.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def log_path(tmp_path, capsys):
    path = tmp_path / "run.jsonl"
    code, _, _ = run_cli(
        capsys, "simulate", "--generations", "4", "--seed", "3", "--out", str(path)
    )
    assert code == 0
    return path


class TestSimulate:
    def test_writes_log_and_prints_report(self, tmp_path, capsys):
        out = tmp_path / "sim.jsonl"
        code, stdout, _ = run_cli(
            capsys,
            "simulate", "--generations", "3", "--seed", "1",
            "--user", "brightness", "--temperature", "25", "--choice-prob", "0.9",
            "--out", str(out),
        )
        assert code == 0
        report = json.loads(stdout)
        assert report["seed"] == 1
        assert len(report["rows"]) == 4
        assert out.exists()

    def test_config_file_applies(self, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"user": {"kind": "random", "choice_prob": 0.0}}))
        code, stdout, _ = run_cli(
            capsys,
            "simulate", "--generations", "2", "--seed", "5",
            "--config", str(config), "--out", str(tmp_path / "r.jsonl"),
        )
        assert code == 0
        rows = json.loads(stdout)["rows"]
        assert all(r["chosen"] is None for r in rows[:-1])

    def test_bad_config_fails_cleanly(self, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"ga": {"population_size": -1}}))
        code, _, stderr = run_cli(
            capsys,
            "simulate", "--generations", "2", "--seed", "5",
            "--config", str(config), "--out", str(tmp_path / "r.jsonl"),
        )
        assert code == 2
        assert "error" in stderr


class TestFdc:
    def test_prints_report_json(self, capsys):
        code, stdout, _ = run_cli(capsys, "fdc", "--metric", "m1", "--samples", "4000", "--seed", "2")
        assert code == 0
        report = json.loads(stdout)
        assert report["metric_name"] == "m1"
        assert report["sample_count"] == 4000
        assert -1.0 <= report["correlation"] <= 1.0

    def test_degenerate_sample_fails_cleanly(self, capsys):
        code, _, stderr = run_cli(capsys, "fdc", "--metric", "ms", "--samples", "2", "--seed", "68")
        assert code == 2
        assert "correlation undefined" in stderr


class TestReplay:
    def test_clean_log_exits_zero(self, log_path, capsys):
        code, stdout, _ = run_cli(capsys, "replay", str(log_path))
        assert code == 0
        assert json.loads(stdout)["divergences"] == []

    def test_tampered_log_exits_one(self, log_path, capsys):
        lines = log_path.read_text().splitlines()
        for i, line in enumerate(lines):
            record = json.loads(line)
            if record["type"] == "fitness":
                record["values"][0] = 0.99
                lines[i] = json.dumps(record)
                break
        log_path.write_text("\n".join(lines) + "\n")
        code, stdout, stderr = run_cli(capsys, "replay", str(log_path))
        assert code == 1
        assert json.loads(stdout)["divergences"]
        assert "divergence" in stderr

    def test_corrupt_log_exits_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.jsonl"
        bad.write_text("not json\n")
        code, _, stderr = run_cli(capsys, "replay", str(bad))
        assert code == 2
        assert "line 1" in stderr


class TestReport:
    def test_csv_and_figures_written(self, log_path, tmp_path, capsys):
        csv_path = tmp_path / "out" / "table.csv"
        csv_path.parent.mkdir()
        code, stdout, _ = run_cli(capsys, "report", str(log_path), "--csv", str(csv_path))
        assert code == 0
        with open(csv_path) as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 5
        assert rows[0]["generation"] == "0"
        assert float(rows[0]["best_m1"]) <= 765
        brightness_fig = csv_path.parent / "table_brightness.png"
        palette_fig = csv_path.parent / "table_palette.png"
        assert brightness_fig.exists() and brightness_fig.stat().st_size > 0
        assert palette_fig.exists() and palette_fig.stat().st_size > 0
        assert str(csv_path) in stdout

    def test_fig_dir_override(self, log_path, tmp_path, capsys):
        figs = tmp_path / "figs"
        code, _, _ = run_cli(
            capsys,
            "report", str(log_path), "--csv", str(tmp_path / "t.csv"), "--fig-dir", str(figs),
        )
        assert code == 0
        assert (figs / "t_brightness.png").exists()
        assert (figs / "t_palette.png").exists()
