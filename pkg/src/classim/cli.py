"""Command-line client: validate rosters, run scripted sessions headless,
benchmark, replay saved logs, and serve the HTTP API."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .benchmark import BenchmarkConfig, run_benchmark
from .config import SimConfig
from .errors import RosterSchemaError, RosterValidationError, SimulationError
from .events import TeacherEvent
from .performer import backend_for
from .session import create_session, replay_log
from .stages import RealismStage
from .store import load_roster


def _load_script(path: str) -> tuple[list[TeacherEvent], int | None, str | None]:
    """Script files are either a bare event array or
    {"seed": n, "stage": "...", "events": [...]}."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise RosterSchemaError(f"{path}: not valid JSON ({exc})") from None
    seed = None
    stage = None
    if isinstance(doc, dict):
        unknown = set(doc) - {"seed", "stage", "events"}
        if unknown:
            raise RosterSchemaError(f"{path}: unknown script fields {sorted(unknown)}")
        seed = doc.get("seed")
        stage = doc.get("stage")
        doc = doc.get("events", [])
    if not isinstance(doc, list):
        raise RosterSchemaError(f"{path}: script must be a list of events")
    return [TeacherEvent.from_json_dict(e) for e in doc], seed, stage


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        roster = load_roster(args.roster)
    except RosterValidationError as exc:
        print(f"INVALID: {exc}")
        for issue in exc.report.issues:
            print(f"  {issue.path}: [{issue.code}] {issue.message}")
        return 1
    print(f"OK: roster {roster.roster_id!r} with {len(roster.students)} student(s)")
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    roster = load_roster(args.roster)
    events, script_seed, script_stage = _load_script(args.script)
    seed = args.seed if args.seed is not None else (script_seed if script_seed is not None else 0)
    stage = RealismStage(args.stage or script_stage or "Stage1")
    config = SimConfig.load(args.config) if args.config else SimConfig()
    if args.backend:
        config.performer.backend = args.backend
    session = create_session(
        roster, stage=stage, seed=seed, config=config, backend=backend_for(config.performer)
    )
    for event in events:
        session.submit_event(event)
    for line in session.transcript_lines():
        print(line)
    if args.out:
        session.save_log(args.out)
        print(f"# log saved to {args.out}", file=sys.stderr)
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    report = run_benchmark(
        BenchmarkConfig(
            per_call_latency_ms=args.latency,
            stages=args.stages,
            beam=args.beam,
            turns=args.turns,
            seed=args.seed if args.seed is not None else 7,
        )
    )
    print(json.dumps(report.to_json_dict(), indent=2))
    return 0


def cmd_replay(args: argparse.Namespace) -> int:
    result = replay_log(args.log)
    for line in result.session.transcript_lines():
        print(line)
    if not result.ok:
        print("REPLAY MISMATCH: log does not reproduce byte-for-byte", file=sys.stderr)
        return 1
    print("# replay OK: log reproduced byte-for-byte", file=sys.stderr)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .api import app

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="classim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="validate a roster file")
    p_validate.add_argument("roster")
    p_validate.set_defaults(func=cmd_validate)

    p_run = sub.add_parser("run", help="run a scripted session headless")
    p_run.add_argument("roster")
    p_run.add_argument("--script", required=True, help="JSON event script")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--stage", choices=[s.value for s in RealismStage], default=None)
    p_run.add_argument("--config", default=None, help="simulator config JSON")
    p_run.add_argument("--backend", choices=["template", "external"], default=None)
    p_run.add_argument("--out", default=None, help="save the session log here")
    p_run.set_defaults(func=cmd_run)

    p_bench = sub.add_parser("bench", help="single-call vs multi-stage benchmark")
    p_bench.add_argument("--latency", type=float, default=100.0, help="mock per-call latency (ms)")
    p_bench.add_argument("--stages", type=int, default=5)
    p_bench.add_argument("--beam", type=int, default=3)
    p_bench.add_argument("--turns", type=int, default=10)
    p_bench.add_argument("--seed", type=int, default=None)
    p_bench.set_defaults(func=cmd_bench)

    p_replay = sub.add_parser("replay", help="re-run a saved session log and verify it")
    p_replay.add_argument("log")
    p_replay.set_defaults(func=cmd_replay)

    p_serve = sub.add_parser("serve", help="start the HTTP session service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SimulationError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error [IO]: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
