"""Command line: catalog listing, benchmark runs, transcript replay,
the HTTP service, and a terminal play loop."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import BoxbenchError
from .protocol import Session, Stage, TurnBudget
from .registry import catalog_json, list_environments


def parse_seeds(text: str) -> list[int]:
    """'0..4' (inclusive range) or '0,3,9'."""
    if ".." in text:
        start, _, end = text.partition("..")
        return list(range(int(start), int(end) + 1))
    return [int(s) for s in text.split(",") if s]


def cmd_envs(args) -> int:
    if args.json:
        print(catalog_json(args.family, args.difficulty))
        return 0
    for spec in list_environments(args.family, args.difficulty):
        print(f"{spec.id:32s} {spec.family:4s} {spec.difficulty:5s} "
              f"K={spec.default_test_count}")
    return 0


def cmd_run(args) -> int:
    from .harness import export_report, make_driver_factory, run_benchmark

    budget = TurnBudget.parse(args.budget)
    run = run_benchmark(
        make_driver_factory(args.driver),
        budget,
        seeds=parse_seeds(args.seeds),
        env_ids=args.env or None,
        family=args.family,
        difficulty=args.difficulty,
        transcript_dir=args.transcripts,
        max_workers=args.workers,
    )
    export_report(run, args.format, args.out)
    aggregates = run.aggregates()
    for key, agg in aggregates.items():
        mean = agg["mean_accuracy"]
        shown = "-" if mean is None else f"{mean:.3f}"
        print(f"{key:12s} sessions={agg['sessions']} errors={agg['errors']} "
              f"mean_accuracy={shown}")
    print(f"report written to {args.out}")
    return 0


def cmd_replay(args) -> int:
    from .harness import replay_file

    result = replay_file(args.transcript)
    print(json.dumps(result, indent=2))
    return 0 if result["matches_recorded"] else 1


def cmd_serve(args) -> int:
    from . import service

    argv = ["--host", args.host, "--port", str(args.port), "--ttl", str(args.ttl)]
    if args.persist:
        argv += ["--persist", str(args.persist)]
    service.main(argv)
    return 0


def cmd_play(args) -> int:
    session = Session(args.env, TurnBudget.parse(args.budget), args.seed)
    print(session.preamble)
    while session.stage is not Stage.DONE:
        try:
            text = input("> ")
        except EOFError:
            print("\nsession abandoned")
            return 1
        if session.stage is Stage.EXPLORATION:
            print(session.submit_exploration(text))
        else:
            print(session.submit_answer(text)[1])
    report = session.score()
    print(f"accuracy: {report.accuracy:.3f}")
    if args.transcript:
        Path(args.transcript).write_text(session.transcript_json())
        print(f"transcript written to {args.transcript}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="boxbench",
        description="Rule-hidden black-box environments and session tooling",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("envs", help="list registered environments")
    p.add_argument("--family", choices=["CII", "CRI", "PSI", "ERI", "IPI", "GSI"])
    p.add_argument("--difficulty", choices=["Easy", "Hard"])
    p.add_argument("--json", action="store_true", help="dump the public catalog")
    p.set_defaults(func=cmd_envs)

    p = sub.add_parser("run", help="run a benchmark")
    p.add_argument("--driver", required=True,
                   help="scripted:NAME | process:CMD... | endpoint:URL#MODEL[#KEY_ENV]")
    p.add_argument("--env", action="append", help="environment id (repeatable)")
    p.add_argument("--family", choices=["CII", "CRI", "PSI", "ERI", "IPI", "GSI"])
    p.add_argument("--difficulty", choices=["Easy", "Hard"])
    p.add_argument("--budget", default="10@1", help="turn@shot, e.g. 10@1 or 20@2")
    p.add_argument("--seeds", default="0", help="e.g. 0..4 or 0,3,9")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--transcripts", type=Path, help="directory for transcripts")
    p.add_argument("--workers", type=int, default=4)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("replay", help="replay a persisted transcript")
    p.add_argument("--transcript", type=Path, required=True)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("serve", help="start the HTTP session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8351)
    p.add_argument("--ttl", type=float, default=24 * 3600)
    p.add_argument("--persist", type=Path)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("play", help="play one session in the terminal")
    p.add_argument("--env", required=True)
    p.add_argument("--budget", default="10@1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--transcript", type=Path)
    p.set_defaults(func=cmd_play)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BoxbenchError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
