"""Session engine tests: stage machine, banners, turn/shot conservation,
deferred-mode equivalence, determinism, and scoring arithmetic."""

import pytest

from boxbench import (
    FeedbackMode,
    NotFound,
    Session,
    Stage,
    StageViolation,
    TurnBudget,
    new_session,
)
from boxbench.errors import BudgetError, UnsupportedFeedbackMode
from boxbench.envs.gsi import optimal_line
from boxbench.protocol import (
    ANSWER_CORRECT,
    ANSWER_WRONG_FINAL,
    ANSWER_WRONG_RETRY,
    replay_transcript,
)


def budget(turns=10, shots=1, mode=FeedbackMode.INSTANT):
    return TurnBudget(turns, shots, mode)


def finish_function_session(session, answer_fn):
    """Answer every evaluation sample with answer_fn(sample_index)."""
    while session.stage is Stage.EVALUATION:
        session.submit_answer(answer_fn(session.sample_index))
    return session


def test_new_session_initial_state():
    session = new_session("eri/caesar-8", budget(), seed=7)
    assert session.stage is Stage.EXPLORATION
    assert session.history == []
    assert session.turns_remaining() == 10


def test_unknown_env_raises():
    with pytest.raises(NotFound):
        new_session("nonexistent", budget(), 0)


def test_bad_budget_rejected():
    with pytest.raises(BudgetError):
        TurnBudget(0, 1)
    with pytest.raises(BudgetError):
        TurnBudget(10, 0)
    with pytest.raises(BudgetError):
        TurnBudget.parse("abc")
    assert TurnBudget.parse("20@2").notation() == "20@2"


def test_gsi_preamble_contains_rules_text():
    session = new_session("gsi/cards-ascending-10", budget(1, 1), seed=3)
    assert "Now Let's Play the Game" in session.preamble
    assert "Exploration Phase Starts" in session.preamble
    assert "Turn 1/" in session.preamble


def test_turn_banner_and_conical_value():
    session = new_session("psi/conical-pendulum", budget(6, 1), seed=0)
    feedback = session.submit_exploration("0")
    assert feedback.startswith(
        "<Current Turn: 1, 5 Turns Remaining> {'object1': (2.5, 0.0, -4.33)}"
    )


def test_stage_flips_after_last_turn():
    session = new_session("eri/caesar-8", budget(2, 1), seed=0)
    session.submit_exploration("a")
    assert session.stage is Stage.EXPLORATION
    feedback = session.submit_exploration("b")
    assert session.stage is Stage.EVALUATION
    assert "Evaluation Starts, You Have 1 Chances for Answering" in feedback
    assert "What's the output of the blackbox" in feedback


def test_turn_conservation():
    session = new_session("eri/caesar-8", budget(3, 1), seed=0)
    for _ in range(3):
        session.submit_exploration("x")
    exploration = [r for r in session.history if r.stage is Stage.EXPLORATION]
    assert len(exploration) == 3
    assert [r.index for r in exploration] == [1, 2, 3]
    with pytest.raises(StageViolation):
        session.submit_exploration("y")


def test_answer_outside_evaluation_raises():
    session = new_session("eri/caesar-8", budget(), seed=0)
    with pytest.raises(StageViolation):
        session.submit_answer("nope")


def test_invalid_query_consumes_turn():
    session = new_session("eri/caesar-8", budget(2, 1), seed=0)
    feedback = session.submit_exploration("123!")
    assert "Invalid input" in feedback
    assert session.turns_remaining() == 1


def test_correct_answer_flow():
    session = new_session("eri/caesar-8", budget(1, 1), seed=1)
    session.submit_exploration("a")
    truth = session.env.samples[0].expected.truth_text()
    verdict, feedback = session.submit_answer(truth)
    assert verdict.correct and verdict.attempts_used == 1
    assert feedback.startswith(ANSWER_CORRECT)


def test_retry_then_final_wrong():
    session = new_session("eri/caesar-8", budget(1, 2), seed=1)
    session.submit_exploration("a")
    verdict, feedback = session.submit_answer("wrong one")
    assert verdict is None and feedback == ANSWER_WRONG_RETRY
    assert session.sample_index == 0
    verdict, feedback = session.submit_answer("still wrong")
    assert verdict is not None and not verdict.correct
    assert verdict.attempts_used == 2
    assert feedback.startswith(ANSWER_WRONG_FINAL)
    assert session.sample_index == 1


def test_shot_and_verdict_conservation():
    session = new_session("eri/caesar-8", budget(1, 2), seed=2)
    session.submit_exploration("a")
    finish_function_session(session, lambda k: "always wrong")
    assert session.stage is Stage.DONE
    assert len(session.verdicts) == session.test_count
    assert all(v.attempts_used <= 2 for v in session.verdicts)
    assert [v.sample_index for v in session.verdicts] == list(range(session.test_count))


def test_score_requires_done():
    session = new_session("eri/caesar-8", budget(1, 1), seed=0)
    with pytest.raises(StageViolation):
        session.score()


def test_accuracy_arithmetic():
    session = new_session("eri/caesar-8", budget(1, 1), seed=3)
    session.submit_exploration("a")
    truths = [s.expected.truth_text() for s in session.env.samples]
    # Answer correctly except samples 2 and 5.
    finish_function_session(
        session, lambda k: truths[k] if k not in (2, 5) else "no"
    )
    report = session.score()
    assert report.accuracy == pytest.approx(6 / 8)
    flipped = sum(v.correct for v in report.per_sample) + 1
    assert flipped / len(report.per_sample) >= report.accuracy


def test_deferred_ack_and_release():
    instant = new_session("eri/caesar-8", budget(3, 1), seed=4)
    deferred = new_session(
        "eri/caesar-8", budget(3, 1, FeedbackMode.DEFERRED), seed=4
    )
    queries = ["abc", "XYZ", "hello world"]
    for query in queries:
        instant.submit_exploration(query)
    deferred_feedback = [deferred.submit_exploration(q) for q in queries]
    # Early turns: acknowledgment only, no ciphertext.
    assert "Feedback recorded" in deferred_feedback[0]
    body = instant.exploration_bodies()[0]
    assert body not in deferred_feedback[0]
    # Final turn releases every (query, feedback) pair with identical bodies.
    release = deferred_feedback[-1]
    for i, (query, body) in enumerate(zip(queries, instant.exploration_bodies()), 1):
        assert f"Query {i}: {query}" in release
        assert f"Feedback {i}: {body}" in release
    assert deferred.exploration_bodies() == instant.exploration_bodies()


def test_deferred_rejected_for_games():
    with pytest.raises(UnsupportedFeedbackMode):
        new_session(
            "gsi/rps7-cycle", budget(1, 1, FeedbackMode.DEFERRED), seed=0
        )


def test_puzzle_session_blocks():
    session = new_session("ipi/number-guessing", budget(2, 1), seed=5)
    assert "A New Puzzle Starts, You can Make 2 Queries" in session.preamble
    session.submit_exploration("Number 50")
    feedback = session.submit_exploration("Number 10")
    assert session.stage is Stage.EVALUATION
    assert "Output the Answer DIRECTLY" in feedback
    truth = session.env.samples[0].expected.truth_text()
    verdict, feedback = session.submit_answer(truth)
    assert verdict.correct
    # Next block: back to exploration with a fresh hidden answer.
    assert session.stage is Stage.EXPLORATION
    assert "A New Puzzle Starts" in feedback
    assert session.sample_index == 1


def test_puzzle_full_session_with_truth_answers():
    session = new_session("ipi/wordle-8", budget(1, 1), seed=6)
    truths = [s.expected.truth_text() for s in session.env.samples]
    while session.stage is not Stage.DONE:
        if session.stage is Stage.EXPLORATION:
            session.submit_exploration("A" * 8)
        else:
            session.submit_answer(truths[session.sample_index])
    assert session.score().accuracy == 1.0
    assert len(session.verdicts) == 6


def play_games_optimally(session):
    strategy_id = session.env.strategy.id
    while session.stage is not Stage.DONE:
        game = session.env.game
        action = optimal_line(strategy_id, game.rounds)[game.turn - 1]
        if session.stage is Stage.EXPLORATION:
            session.submit_exploration(action)
        else:
            session.submit_answer(action)
    return session


def test_game_session_optimal_play_scores_one():
    session = new_session("gsi/cards-ascending-10", budget(1, 1), seed=3)
    play_games_optimally(session)
    report = session.score()
    assert report.accuracy == 1.0
    assert all(v.score == 1.0 for v in report.per_sample)
    assert len(report.per_sample) == 4


def test_game_session_never_leaks_strategy():
    session = new_session("gsi/lsd-attacker", budget(1, 1), seed=2)
    markers = session.env.hidden_markers()
    everything = [session.preamble]
    while session.stage is not Stage.DONE:
        game = session.env.game
        action = optimal_line("lsd-attacker", game.rounds)[game.turn - 1]
        if session.stage is Stage.EXPLORATION:
            everything.append(session.submit_exploration(action))
        else:
            everything.append(session.submit_answer(action)[1])
    text = "\n".join(everything)
    for marker in markers:
        assert marker not in text


def test_game_session_banners_between_phases():
    session = new_session("gsi/lsd-balance", budget(2, 1), seed=0)
    assert "Exploration Round <1/2> Start" in session.preamble
    seen = []
    while session.stage is not Stage.DONE:
        game = session.env.game
        action = optimal_line("lsd-balance", game.rounds)[game.turn - 1]
        if session.stage is Stage.EXPLORATION:
            seen.append(session.submit_exploration(action))
        else:
            seen.append(session.submit_answer(action)[1])
    text = "\n".join(seen)
    assert "Exploration Round <2/2> Start" in text
    assert "Evaluation Phase Starts, We Will Play the Game for 1 Time" in text
    assert "Now is the 0 time" in text


def test_game_invalid_action_consumes_nothing():
    session = new_session("gsi/lsd-balance", budget(1, 1), seed=0)
    before = session.env.game.turn
    feedback = session.submit_exploration("what are the rules?")
    assert "Invalid action type" in feedback
    assert session.env.game.turn == before
    assert session.turns_remaining() == 1


def test_negative_total_clips_to_zero():
    session = new_session("gsi/cards-ascending-10", budget(1, 1), seed=3)
    # Realize total -(N-2): sacrifice N-1 to the opening N, burn N against
    # the opponent's 1, then stay exactly one below every later card.
    def losing_action(game):
        if game.turn == 1:
            return f"card {game.rounds - 1}"
        if game.turn == 2:
            return f"card {game.rounds}"
        return f"card {game.turn - 2}"

    while session.stage is not Stage.DONE:
        action = losing_action(session.env.game)
        if session.stage is Stage.EXPLORATION:
            session.submit_exploration(action)
        else:
            session.submit_answer(action)
    assert all(session.env.samples[v.sample_index].rounds > 2 for v in session.verdicts)
    report = session.score()
    assert all(v.score == 0.0 for v in report.per_sample)
    assert report.accuracy == 0.0


def run_scripted(env_id, seed, mode=FeedbackMode.INSTANT):
    session = new_session(env_id, TurnBudget(2, 1, mode), seed)
    for query in ("a b", "zz"):
        session.submit_exploration(query)
    truths = [s.expected.truth_text() for s in session.env.samples]
    finish_function_session(
        session, lambda k: truths[k] if k % 2 == 0 else "wrong"
    )
    return session.transcript()


def test_determinism_byte_identical_transcripts():
    first = run_scripted("eri/fibonacci", seed=9)
    second = run_scripted("eri/fibonacci", seed=9)
    assert first == second
    other_seed = run_scripted("eri/fibonacci", seed=10)
    assert other_seed != first


def test_transcript_schema_and_replay():
    transcript = run_scripted("eri/caesar-8", seed=11)
    assert set(transcript) == {
        "env_id", "seed", "budget", "preamble", "exchanges", "verdicts", "report"
    }
    assert transcript["report"] is not None
    reproduced = replay_transcript(transcript)
    assert reproduced.to_dict() == transcript["report"]


def test_function_stage_never_backward():
    session = new_session("cri/and-tree-8", budget(2, 1), seed=0)
    order = [session.stage]
    session.submit_exploration("(1, 1, 1, 1, 1, 1, 1, 1)")
    order.append(session.stage)
    session.submit_exploration("(0, 0, 0, 0, 0, 0, 0, 0)")
    order.append(session.stage)
    truths = [s.expected.truth_text() for s in session.env.samples]
    finish_function_session(session, lambda k: truths[k])
    order.append(session.stage)
    ranks = [list(Stage).index(s) for s in order]
    assert ranks == sorted(ranks)
    assert session.score().accuracy == 1.0
