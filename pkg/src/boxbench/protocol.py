"""Two-stage black-box interaction sessions.

A session runs exploration turns against a seeded environment instance
and then evaluation turns over its fixed test set, producing binary
correctness signals (ratio scores for game environments) and a final
accuracy report.  Feedback strings follow the documented canonical
formats; identical (env id, seed, query sequence, answer sequence)
reproduce byte-identical transcripts.

Interaction styles:

* function (CII, CRI, PSI, ERI): one shared exploration phase of T
  turns, then K samples answered with up to ``shots`` attempts each.
* puzzle (IPI): K blocks; each block binds a fresh hidden answer,
  grants T exploration queries, then one answer with ``shots`` attempts.
* game (GSI): K blocks keyed by round count; each block plays T full
  exploration games, then ``shots`` recorded games of which the best
  ratio against the optimal total is kept.

Exploration stage transitions never run backward within a block; puzzle
and game sessions loop blocks, which is how per-sample exploration is
realized for those families.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .errors import BudgetError, StageViolation, UnsupportedFeedbackMode
from .registry import Environment, instantiate


class Stage(str, Enum):
    EXPLORATION = "Exploration"
    EVALUATION = "Evaluation"
    DONE = "Done"


class FeedbackMode(str, Enum):
    INSTANT = "Instant"
    DEFERRED = "Deferred"


@dataclass(frozen=True)
class TurnBudget:
    exploration_turns: int
    shots_per_sample: int
    feedback_mode: FeedbackMode = FeedbackMode.INSTANT

    def __post_init__(self):
        if self.exploration_turns < 1 or self.shots_per_sample < 1:
            raise BudgetError(
                "exploration_turns and shots_per_sample must both be >= 1"
            )

    @classmethod
    def parse(cls, text: str, feedback_mode: FeedbackMode = FeedbackMode.INSTANT):
        """Parse the turn@shot notation, e.g. '10@1' or '20@2'."""
        try:
            turns, _, shots = text.partition("@")
            return cls(int(turns), int(shots), feedback_mode)
        except ValueError:
            raise BudgetError(f"bad budget {text!r}; expected T@s like 10@1") from None

    def notation(self) -> str:
        return f"{self.exploration_turns}@{self.shots_per_sample}"

    def to_dict(self) -> dict:
        return {
            "exploration_turns": self.exploration_turns,
            "shots_per_sample": self.shots_per_sample,
            "feedback_mode": self.feedback_mode.value,
        }


@dataclass(frozen=True)
class ExchangeRecord:
    stage: Stage
    index: int
    query: str
    feedback: str

    def to_dict(self) -> dict:
        return {
            "stage": self.stage.value,
            "index": self.index,
            "query": self.query,
            "feedback": self.feedback,
        }


@dataclass
class Verdict:
    sample_index: int
    correct: bool
    attempts_used: int
    score: Optional[float] = None  # game ratio; None for judged families

    def to_dict(self) -> dict:
        data = {
            "sample_index": self.sample_index,
            "correct": self.correct,
            "attempts_used": self.attempts_used,
        }
        if self.score is not None:
            data["score"] = self.score
        return data


@dataclass
class ScoreReport:
    env_id: str
    accuracy: float
    per_sample: list[Verdict]
    budget: TurnBudget

    def to_dict(self) -> dict:
        return {
            "env_id": self.env_id,
            "accuracy": self.accuracy,
            "per_sample": [v.to_dict() for v in self.per_sample],
            "budget": self.budget.to_dict(),
        }


ANSWER_CORRECT = "Your answer is correct."
ANSWER_WRONG_FINAL = "Your answer is wrong. Let's move to next question."
ANSWER_WRONG_RETRY = "Your answer is wrong. Try again."
DEFERRED_ACK = (
    "Feedback recorded. All queries and feedback will be revealed in the "
    "final exploration turn."
)


def _turn_banner(turn: int, total: int) -> str:
    return f"<Current Turn: {turn}, {total - turn} Turns Remaining>"


def _eval_banner(shots: int) -> str:
    return (
        f"********Evaluation Starts, You Have {shots} Chances for Answering "
        "Each Question********"
    )


def _puzzle_block_banner(turns: int, shots: int) -> str:
    return (
        f"********A New Puzzle Starts, You can Make {turns} Queries Before "
        f"Answering Each Question. And Then You Have {shots} Chances for "
        "Answering. Output the Value Only.********"
    )


def _puzzle_eval_banner(shots: int) -> str:
    return (
        f"********Evaluation Starts, You Have {shots} Chances for Answering, "
        "Please Output the Answer DIRECTLY.********"
    )


def _game_explore_banner(turns: int) -> str:
    return (
        f"********Exploration Phase Starts, We wll Play the Game for {turns} "
        "Times. Your Actions Will Not Be Recorded, and Your Score Does Not "
        "Matter.**********"
    )


def _game_round_banner(game_no: int, turns: int) -> str:
    return f"***Exploration Round <{game_no}/{turns}> Start***"


def _game_eval_banner(shots: int, attempt: int) -> str:
    return (
        f"********Evaluation Phase Starts, We Will Play the Game for {shots} "
        f"Time. Now is the {attempt} time. The highest score Will Be "
        "Recorded.**********"
    )


class Session:
    """Single-writer interaction session over one environment instance."""

    def __init__(self, env_id: str, budget: TurnBudget, seed: int):
        env = instantiate(env_id, seed)
        if env.style == "game" and budget.feedback_mode is FeedbackMode.DEFERRED:
            raise UnsupportedFeedbackMode(
                "Deferred feedback requires per-turn queries; game "
                "environments interleave actions inside rounds."
            )
        self.env: Environment = env
        self.env_id = env.spec.id
        self.seed = seed
        self.budget = budget
        self.stage = Stage.EXPLORATION
        self.history: list[ExchangeRecord] = []
        self.verdicts: list[Verdict] = []
        self.sample_index = 0
        self.attempts = 0
        self.turn = 0  # exploration turns used in the current block
        self._bodies: list[str] = []  # per-turn environment feedback bodies
        self._block_pairs: list[tuple[str, str]] = []  # current block (q, body)
        # game bookkeeping
        self._games_done = 0
        self._best_ratio = 0.0
        self.preamble = self._build_preamble()

    # -- construction ---------------------------------------------------------
    def _build_preamble(self) -> str:
        text = self.env.preamble()
        turns = self.budget.exploration_turns
        if self.env.style == "function":
            text += (
                f"\n\nYou have {turns} interaction turns to understand the "
                "black-box. Now the interaction starts. Only output the "
                "value and DO NOT contain any unrelated text."
            )
        elif self.env.style == "puzzle":
            text += "\n\n" + _puzzle_block_banner(
                turns, self.budget.shots_per_sample
            )
        else:
            text += "\n\n" + _game_explore_banner(turns)
            text += "\n" + _game_round_banner(1, turns)
            text += "\n" + self.env.begin_game(0)
        return text

    # -- helpers ----------------------------------------------------------------
    @property
    def test_count(self) -> int:
        return self.env.test_count()

    def turns_remaining(self) -> int:
        if self.stage is not Stage.EXPLORATION:
            return 0
        if self.env.style == "game":
            return self.budget.exploration_turns - self._games_done
        return self.budget.exploration_turns - self.turn

    def _record(self, stage: Stage, query: str, feedback: str) -> str:
        index = sum(1 for r in self.history if r.stage is stage) + 1
        self.history.append(ExchangeRecord(stage, index, query, feedback))
        return feedback

    def _question_text(self, index: int) -> str:
        question = self.env.eval_question(index)
        return ("\n" + question) if question else ""

    # -- exploration -------------------------------------------------------------
    def submit_exploration(self, query: str) -> str:
        if self.stage is not Stage.EXPLORATION:
            raise StageViolation(f"cannot explore in stage {self.stage.value}")
        if self.env.style == "game":
            return self._game_exploration(query)
        self.turn += 1
        body = self.env.explore(query)
        self._bodies.append(body)
        self._block_pairs.append((query, body))
        total = self.budget.exploration_turns
        banner = _turn_banner(self.turn, total)
        if self.budget.feedback_mode is FeedbackMode.INSTANT:
            feedback = f"{banner} {body}"
        elif self.turn < total:
            feedback = f"{banner} {DEFERRED_ACK}"
        else:
            feedback = f"{banner} " + self._deferred_release()
        if self.turn == total:
            feedback += self._begin_evaluation()
        return self._record(Stage.EXPLORATION, query, feedback)

    def _deferred_release(self) -> str:
        lines = ["All queries and feedback:"]
        for i, (query, body) in enumerate(self._block_pairs, start=1):
            lines.append(f"Query {i}: {query}")
            lines.append(f"Feedback {i}: {body}")
        return "\n".join(lines)

    def _begin_evaluation(self) -> str:
        self.stage = Stage.EVALUATION
        self.attempts = 0
        if self.env.style == "puzzle":
            return "\n" + _puzzle_eval_banner(self.budget.shots_per_sample)
        return (
            "\n"
            + _eval_banner(self.budget.shots_per_sample)
            + self._question_text(self.sample_index)
        )

    def _game_exploration(self, action: str) -> str:
        result = self.env.game_step(action)
        feedback = result.feedback
        if result.done:
            self._games_done += 1
            turns = self.budget.exploration_turns
            if self._games_done < turns:
                feedback += "\n" + _game_round_banner(self._games_done + 1, turns)
                feedback += "\n" + self.env.begin_game(self.sample_index)
            else:
                self.stage = Stage.EVALUATION
                self.attempts = 0
                self._best_ratio = 0.0
                feedback += "\n" + _game_eval_banner(
                    self.budget.shots_per_sample, 0
                )
                feedback += "\n" + self.env.begin_game(self.sample_index)
        return self._record(Stage.EXPLORATION, action, feedback)

    # -- evaluation ------------------------------------------------------------
    def submit_answer(self, answer: str) -> tuple[Optional[Verdict], str]:
        if self.stage is not Stage.EVALUATION:
            raise StageViolation(f"cannot answer in stage {self.stage.value}")
        if self.env.style == "game":
            return self._game_answer(answer)
        self.attempts += 1
        correct = self.env.judge(self.sample_index, answer)
        if correct:
            verdict = Verdict(self.sample_index, True, self.attempts)
            feedback = ANSWER_CORRECT
        elif self.attempts < self.budget.shots_per_sample:
            self._record(Stage.EVALUATION, answer, ANSWER_WRONG_RETRY)
            return None, ANSWER_WRONG_RETRY
        else:
            verdict = Verdict(self.sample_index, False, self.attempts)
            feedback = ANSWER_WRONG_FINAL
        feedback += self._advance_sample(verdict)
        self._record(Stage.EVALUATION, answer, feedback)
        return verdict, feedback

    def _advance_sample(self, verdict: Verdict) -> str:
        self.verdicts.append(verdict)
        self.sample_index += 1
        self.attempts = 0
        if self.sample_index >= self.test_count:
            self.stage = Stage.DONE
            return ""
        if self.env.style == "puzzle":
            self.env.start_sample(self.sample_index)
            self.stage = Stage.EXPLORATION
            self.turn = 0
            self._block_pairs = []
            return "\n" + _puzzle_block_banner(
                self.budget.exploration_turns, self.budget.shots_per_sample
            )
        if self.env.style == "game":
            self.stage = Stage.EXPLORATION
            self._games_done = 0
            turns = self.budget.exploration_turns
            return (
                "\n" + _game_explore_banner(turns)
                + "\n" + _game_round_banner(1, turns)
                + "\n" + self.env.begin_game(self.sample_index)
            )
        return self._question_text(self.sample_index)

    def _game_answer(self, action: str) -> tuple[Optional[Verdict], str]:
        from .envs.gsi import score_match

        result = self.env.game_step(action)
        feedback = result.feedback
        if not result.done:
            self._record(Stage.EVALUATION, action, feedback)
            return None, feedback
        ratio = score_match(
            self.env.game_total(), self.env.optimal(self.sample_index)
        )
        self._best_ratio = max(self._best_ratio, ratio)
        self.attempts += 1
        if self.attempts < self.budget.shots_per_sample:
            feedback += "\n" + _game_eval_banner(
                self.budget.shots_per_sample, self.attempts
            )
            feedback += "\n" + self.env.begin_game(self.sample_index)
            self._record(Stage.EVALUATION, action, feedback)
            return None, feedback
        verdict = Verdict(
            self.sample_index,
            self._best_ratio >= 1.0 - 1e-9,
            self.attempts,
            score=self._best_ratio,
        )
        feedback += self._advance_sample(verdict)
        self._record(Stage.EVALUATION, action, feedback)
        return verdict, feedback

    # -- scoring ---------------------------------------------------------------
    def score(self) -> ScoreReport:
        if self.stage is not Stage.DONE:
            raise StageViolation("score requires stage Done")
        if self.env.style == "game":
            accuracy = sum(v.score for v in self.verdicts) / len(self.verdicts)
        else:
            accuracy = sum(v.correct for v in self.verdicts) / len(self.verdicts)
        return ScoreReport(self.env_id, accuracy, list(self.verdicts), self.budget)

    # -- export -------------------------------------------------------------------
    def exploration_bodies(self) -> list[str]:
        """Environment feedback bodies per exploration turn (banner-free)."""
        return list(self._bodies)

    def transcript(self) -> dict:
        return {
            "env_id": self.env_id,
            "seed": self.seed,
            "budget": self.budget.to_dict(),
            "preamble": self.preamble,
            "exchanges": [r.to_dict() for r in self.history],
            "verdicts": [v.to_dict() for v in self.verdicts],
            "report": self.score().to_dict() if self.stage is Stage.DONE else None,
        }

    def transcript_json(self) -> str:
        return json.dumps(self.transcript(), indent=2)


def new_session(env_id: str, budget: TurnBudget, seed: int) -> Session:
    """Create a session; raises NotFound for unknown ids."""
    return Session(env_id, budget, seed)


def replay_transcript(transcript: dict) -> ScoreReport:
    """Re-run the recorded query/answer sequence through a fresh
    environment and return the reproduced report."""
    budget_data = transcript["budget"]
    budget = TurnBudget(
        budget_data["exploration_turns"],
        budget_data["shots_per_sample"],
        FeedbackMode(budget_data.get("feedback_mode", "Instant")),
    )
    session = Session(transcript["env_id"], budget, transcript["seed"])
    for record in transcript["exchanges"]:
        if record["stage"] == Stage.EXPLORATION.value:
            session.submit_exploration(record["query"])
        else:
            session.submit_answer(record["query"])
    return session.score()
