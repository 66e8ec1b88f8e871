"""Benchmark runner: drives agents through sessions and aggregates
per-environment reports into family x difficulty tables."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from ..protocol import Session, Stage, TurnBudget, replay_transcript
from ..registry import get_spec, list_environments
from .drivers import AgentDriver, DriverError


@dataclass
class SessionRow:
    env_id: str
    family: str
    difficulty: str
    seed: int
    accuracy: Optional[float]  # None when aborted
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "env_id": self.env_id,
            "family": self.family,
            "difficulty": self.difficulty,
            "seed": self.seed,
            "accuracy": self.accuracy,
            "error": self.error,
        }


@dataclass
class BenchmarkRun:
    budget: TurnBudget
    rows: list[SessionRow] = field(default_factory=list)

    def aggregates(self) -> dict:
        """Mean accuracy per family x difficulty over completed sessions,
        plus an error count per group."""
        groups: dict[str, dict] = {}
        for row in self.rows:
            key = f"{row.family}/{row.difficulty}"
            group = groups.setdefault(
                key, {"accuracies": [], "errors": 0, "sessions": 0}
            )
            group["sessions"] += 1
            if row.accuracy is None:
                group["errors"] += 1
            else:
                group["accuracies"].append(row.accuracy)
        return {
            key: {
                "sessions": g["sessions"],
                "errors": g["errors"],
                "mean_accuracy": (
                    sum(g["accuracies"]) / len(g["accuracies"])
                    if g["accuracies"]
                    else None
                ),
            }
            for key, g in sorted(groups.items())
        }

    def to_dict(self) -> dict:
        return {
            "budget": self.budget.to_dict(),
            "rows": [r.to_dict() for r in self.rows],
            "aggregates": self.aggregates(),
        }


def _exchange_cap(session: Session) -> int:
    budget = session.budget
    per_sample = budget.exploration_turns + budget.shots_per_sample
    scale = 24 if session.env.style == "game" else 2
    return 64 + scale * per_sample * (session.test_count + 1)


def drive_session(
    session: Session, driver: AgentDriver, max_exchanges: Optional[int] = None
) -> None:
    """Run one driver through a session until Done.

    Raises DriverError when the driver fails or runs past the exchange
    cap (runaway format violations never terminate a game session on
    their own, so the cap backstops them).
    """
    cap = max_exchanges or _exchange_cap(session)
    prompt = session.preamble
    for _ in range(cap):
        if session.stage is Stage.DONE:
            return
        reply = driver.respond(prompt)
        if session.stage is Stage.EXPLORATION:
            prompt = session.submit_exploration(reply)
        else:
            _, prompt = session.submit_answer(reply)
    if session.stage is not Stage.DONE:
        raise DriverError(f"exchange cap {cap} exceeded")


def run_benchmark(
    driver_factory: Callable[[], AgentDriver],
    budget: TurnBudget,
    seeds: list[int],
    env_ids: Optional[list[str]] = None,
    family: Optional[str] = None,
    difficulty: Optional[str] = None,
    transcript_dir: Optional[Path] = None,
    max_workers: int = 4,
) -> BenchmarkRun:
    if env_ids:
        specs = [get_spec(env_id) for env_id in env_ids]
    else:
        specs = list_environments(family, difficulty)
    jobs = [(spec, seed) for spec in specs for seed in seeds]

    def one(job) -> SessionRow:
        spec, seed = job
        driver = None
        try:
            driver = driver_factory()
            session = Session(spec.id, budget, seed)
            drive_session(session, driver)
            accuracy = session.score().accuracy
            if transcript_dir is not None:
                name = f"{spec.id.replace('/', '_')}_seed{seed}.json"
                path = Path(transcript_dir) / name
                path.write_text(session.transcript_json())
            return SessionRow(
                spec.id, spec.family, spec.difficulty, seed, accuracy
            )
        except DriverError as err:
            return SessionRow(
                spec.id, spec.family, spec.difficulty, seed, None, str(err)
            )
        finally:
            if driver is not None:
                driver.close()

    run = BenchmarkRun(budget)
    if transcript_dir is not None:
        Path(transcript_dir).mkdir(parents=True, exist_ok=True)
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        run.rows = list(pool.map(one, jobs))
    run.rows.sort(key=lambda r: (r.env_id, r.seed))
    return run


def export_report(run: BenchmarkRun, fmt: str, path: Path) -> None:
    path = Path(path)
    if fmt == "json":
        path.write_text(json.dumps(run.to_dict(), indent=2))
    elif fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(["env_id", "family", "difficulty", "seed", "accuracy"])
        for row in run.rows:
            writer.writerow(
                [row.env_id, row.family, row.difficulty, row.seed,
                 "" if row.accuracy is None else row.accuracy]
            )
        path.write_text(buffer.getvalue())
    else:
        raise ValueError(f"unknown export format {fmt!r}")


def import_report(path: Path) -> BenchmarkRun:
    data = json.loads(Path(path).read_text())
    budget = TurnBudget(
        data["budget"]["exploration_turns"],
        data["budget"]["shots_per_sample"],
    )
    run = BenchmarkRun(budget)
    run.rows = [
        SessionRow(
            r["env_id"], r["family"], r["difficulty"], r["seed"],
            r["accuracy"], r.get("error"),
        )
        for r in data["rows"]
    ]
    return run


def replay_file(path: Path) -> dict:
    """Replay a persisted transcript; returns the reproduced report and
    whether it matches the recorded one bit-for-bit."""
    transcript = json.loads(Path(path).read_text())
    report = replay_transcript(transcript)
    return {
        "report": report.to_dict(),
        "matches_recorded": report.to_dict() == transcript.get("report"),
    }
