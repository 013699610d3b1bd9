"""Command-line interface.

Subcommands:
  serve     run the WebSocket engine for live clients
  simulate  run headlessly against a synthetic user, writing a session log
  fdc       estimate the fitness-distance correlation of a color metric
  replay    re-run a session log and verify it reproduces bit-exactly
  report    tabulate a session log to CSV and render figures next to it
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Optional, Sequence

from .config import EngineConfig, load_config
from .genome import METRICS, fdc
from .report import write_report
from .runner import replay, run_headless, summarize_log
from .server import SessionServer
from .simuser import USER_KINDS


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2))


def _engine_config(args) -> EngineConfig:
    return load_config(args.config) if args.config else EngineConfig()


def cmd_serve(args) -> int:
    config = _engine_config(args)
    server = SessionServer(
        host=args.host, port=args.port, seed=args.seed, config=config, log_dir=args.log_dir
    )
    print(f"engine listening on ws://{args.host}:{server.port} (seed {args.seed})")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.stop()
    return 0


def cmd_simulate(args) -> int:
    config = _engine_config(args)
    user = config.user
    overrides = {}
    if args.user is not None:
        overrides["kind"] = args.user
    if args.temperature is not None:
        overrides["temperature"] = args.temperature
    if args.choice_prob is not None:
        overrides["choice_prob"] = args.choice_prob
    if args.noise is not None:
        overrides["noise"] = args.noise
    if overrides:
        user = dataclasses.replace(user, **overrides)
    report = run_headless(
        cfg=config.ga,
        model=user,
        generations=args.generations,
        seed=args.seed,
        log_path=args.out,
        fatigue_threshold=config.fatigue_threshold,
    )
    _print_json(report.to_dict())
    return 0


def cmd_fdc(args) -> int:
    report = fdc(args.metric, args.samples, args.seed)
    _print_json(report.to_dict())
    return 0


def cmd_replay(args) -> int:
    report = replay(args.log)
    _print_json(report.to_dict())
    if report.divergences:
        print(f"{len(report.divergences)} divergence(s) found", file=sys.stderr)
        return 1
    return 0


def cmd_report(args) -> int:
    report = summarize_log(args.log)
    produced = write_report(report, args.log, args.csv, args.fig_dir)
    for name, path in produced.items():
        print(f"{name}: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gazevolve",
        description="Gaze-driven interactive evolution of colors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the WebSocket engine")
    p.add_argument("--port", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--config", help="engine config JSON file")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--log-dir", help="write one replayable session log per connection")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("simulate", help="run headlessly against a synthetic user")
    p.add_argument("--generations", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--user", choices=USER_KINDS, help="synthetic user kind")
    p.add_argument("--temperature", type=float, help="softmax temperature (brightness user)")
    p.add_argument("--choice-prob", type=float, dest="choice_prob")
    p.add_argument("--noise", type=float, help="per-sample zone-switch probability")
    p.add_argument("--config", help="engine config JSON file")
    p.add_argument("--out", required=True, help="session log to write (JSONL)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fdc", help="fitness-distance correlation of a color metric")
    p.add_argument("--metric", choices=sorted(METRICS), required=True)
    p.add_argument("--samples", type=int, default=4000)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_fdc)

    p = sub.add_parser("replay", help="verify a session log reproduces bit-exactly")
    p.add_argument("log", help="session log (JSONL)")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("report", help="per-generation CSV table plus figures")
    p.add_argument("log", help="session log (JSONL)")
    p.add_argument("--csv", required=True, help="output CSV path")
    p.add_argument("--fig-dir", help="directory for figures (default: beside the CSV)")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:  # covers ConfigError, LogIntegrityError, bad metrics
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
