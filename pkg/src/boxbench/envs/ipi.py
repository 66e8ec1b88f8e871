"""Interactive puzzles with hidden answers.

Each evaluation sample is a fresh puzzle instance: the session engine
calls :meth:`start_sample` before the sample's exploration block, so the
hidden answer and any feedback noise are re-derived from (seed, sample).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

from ..registry import Environment, EnvironmentSpec, ExactMatch, TestSample, register
from ..seeding import stable_rng


def wordle_feedback(hidden: str, guess: str) -> str:
    """Two-pass scoring: exact matches consume letters first, then
    misplaced letters consume the remaining copies."""
    if len(hidden) != len(guess):
        raise ValueError("length mismatch")
    remaining: dict[str, int] = {}
    marks = [""] * len(guess)
    for i, (h, g) in enumerate(zip(hidden, guess)):
        if h == g:
            marks[i] = "A"
        else:
            remaining[h] = remaining.get(h, 0) + 1
    for i, g in enumerate(guess):
        if marks[i]:
            continue
        if remaining.get(g, 0) > 0:
            remaining[g] -= 1
            marks[i] = "M"
        else:
            marks[i] = "X"
    return "".join(marks)


def _words(length: int) -> list[str]:
    name = f"words{length}.txt"
    return resources.files("boxbench.data").joinpath(name).read_text().split()


@dataclass
class PuzzleKind:
    id: str
    difficulty: str
    description: str
    setup: Callable = field(repr=False)   # rng -> hidden state dict
    answer: Callable = field(repr=False)  # hidden -> required answer text
    step: Callable = field(repr=False)    # (env, query) -> feedback


# -- three-arm bandit ---------------------------------------------------------

_BANDIT_ARMS = ("A", "B", "C")


def _bandit_setup(rng) -> dict:
    # Probabilities in tenths from {0.2..0.8} with a gap of at least 0.2
    # between the best and second-best arm, so the answer is well defined.
    best = rng.choice([4, 5, 6, 7, 8])
    tenths = [best] + [rng.randint(2, best - 2) for _ in range(2)]
    order = rng.sample(range(3), 3)
    arms = {arm: tenths[order[i]] / 10 for i, arm in enumerate(_BANDIT_ARMS)}
    return {"probs": arms}


def _bandit_answer(hidden) -> str:
    best = max(hidden["probs"], key=lambda arm: hidden["probs"][arm])
    return f"Bandit {best}"


def _bandit_step(env, query: str) -> str:
    text = query.strip()
    match = re.fullmatch(r"Bandit ([ABC])", text)
    if not match:
        return (
            "Invalid query. Choose a machine with 'Bandit A', 'Bandit B', "
            "or 'Bandit C'."
        )
    p = env.hidden["probs"][match.group(1)]
    reward = 1 if env.stream.random() < p else 0
    return f"Reward: {reward}"


# -- single battleship --------------------------------------------------------

def _battleship_setup(rng) -> dict:
    orientation = rng.choice(["Row", "Column"])
    return {"orientation": orientation, "index": rng.randint(1, 9)}


def _battleship_answer(hidden) -> str:
    return f"{hidden['orientation']} {hidden['index']}"


def _battleship_step(env, query: str) -> str:
    match = re.fullmatch(r"\(\s*(\d)\s*,\s*(\d)\s*\)", query.strip())
    if not match:
        return (
            "Invalid query. Guess a coordinate in the form '(x, y)' with x "
            "and y from 1 to 9."
        )
    x, y = int(match.group(1)), int(match.group(2))
    if not (1 <= x <= 9 and 1 <= y <= 9):
        return (
            "Invalid query. Guess a coordinate in the form '(x, y)' with x "
            "and y from 1 to 9."
        )
    hidden = env.hidden
    hit = x == hidden["index"] if hidden["orientation"] == "Row" else y == hidden["index"]
    return "hits" if hit else "misses"


# -- wordle -------------------------------------------------------------------

def _wordle_setup_for(length: int):
    def setup(rng) -> dict:
        return {"word": rng.choice(_words(length)), "length": length}

    return setup


def _wordle_answer(hidden) -> str:
    return hidden["word"]


def _wordle_step(env, query: str) -> str:
    guess = query.strip().upper()
    length = env.hidden["length"]
    if not (guess.isalpha() and len(guess) == length):
        return f"Invalid query. Please guess a {length}-letter uppercase word."
    return wordle_feedback(env.hidden["word"], guess)


# -- heavy coin with a lying balance -----------------------------------------

def _heavy_coin_setup(rng) -> dict:
    return {"coin": rng.randint(1, 100)}


def _heavy_coin_answer(hidden) -> str:
    return f"Heavy Coin {hidden['coin']}"


_SIDE = re.compile(
    r"Left:\s*((?:Coin \d+(?:,\s*)?)+);\s*Right:\s*((?:Coin \d+(?:,\s*)?)+)"
)


def _parse_coins(part: str) -> list[int]:
    return [int(m) for m in re.findall(r"Coin (\d+)", part)]


def _heavy_coin_step(env, query: str) -> str:
    match = _SIDE.fullmatch(query.strip())
    if not match:
        return (
            "Invalid query. Use the format 'Left: Coin 1, Coin 2; Right: "
            "Coin 3, Coin 4'."
        )
    left, right = _parse_coins(match.group(1)), _parse_coins(match.group(2))
    if set(left) & set(right):
        return "Invalid query. The two sides must not share coins."
    if any(not 1 <= c <= 100 for c in left + right):
        return "Invalid query. Coins are numbered 1 to 100."
    heavy = env.hidden["coin"]

    def weight(side):
        return sum(1.1 if c == heavy else 1.0 for c in side)

    truthful = "Balance" if weight(left) == weight(right) else "Imbalance"
    env.weighings += 1
    position = (env.weighings - 1) % 10 + 1
    if position == 1:
        env.lie_position = env.stream.randint(1, 10)
    if position == env.lie_position:
        return "Imbalance" if truthful == "Balance" else "Balance"
    return truthful


# -- number guessing ----------------------------------------------------------

def _number_setup(rng) -> dict:
    return {"secret": rng.randint(0, 100)}


def _number_answer(hidden) -> str:
    return f"Number {hidden['secret']}"


def _number_step(env, query: str) -> str:
    match = re.fullmatch(r"Number (-?\d+)", query.strip())
    if not match:
        return "Invalid query. Guess in the form 'Number X' (e.g. Number 10)."
    guess = int(match.group(1))
    return "Close" if abs(guess - env.hidden["secret"]) <= 15 else "Far"


CATALOG: dict[str, PuzzleKind] = {}


def _puzzle(kind: PuzzleKind) -> None:
    CATALOG[kind.id] = kind


_puzzle(PuzzleKind(
    "bandit-3", "Easy",
    "In the 3-Arm Bandit problem, there are 3 slot machines named 'Bandit "
    "A', 'Bandit B', and 'Bandit C'. Each machine has a probability of "
    "winning, which is unknown to you. Choose a machine each round with "
    "'Bandit A', 'Bandit B', or 'Bandit C' and receive a reward such as "
    "'Reward: 0' or 'Reward: 1' based on the machine's winning "
    "probability. Finally, answer 'Bandit A', 'Bandit B' or 'Bandit C' to "
    "indicate which bandit you believe has the higher winning probability.",
    _bandit_setup, _bandit_answer, _bandit_step,
))
_puzzle(PuzzleKind(
    "battleship-solo", "Easy",
    "Single Battleship is a simplified Battleship game: a single hidden "
    "battleship occupies a whole row or a whole column of a 9x9 grid. "
    "Guess coordinates in the form '(x, y)', from '(1, 1)' to '(9, 9)'; "
    "the game answers 'hits' or 'misses'. Finally, answer the battleship "
    "position in the format 'Row X' or 'Column Y' with X and Y from 1 to 9.",
    _battleship_setup, _battleship_answer, _battleship_step,
))
_puzzle(PuzzleKind(
    "wordle-8", "Easy",
    "Wordle is a word-guessing game where players attempt to deduce a "
    "hidden 8-letter word (all uppercase). Each guess provides feedback: "
    "(1) Correct letter in the correct position, represented by 'A'; (2) "
    "Correct letter but misplaced, represented by 'M'; (3) Letter not in "
    "the word, represented by 'X'. Finally, give the 8-letter uppercase "
    "word answer directly.",
    _wordle_setup_for(8), _wordle_answer, _wordle_step,
))
_puzzle(PuzzleKind(
    "heavy-coin", "Easy",
    "There are 100 coins named 'Coin 1' to 'Coin 100'; exactly one is "
    "heavier than the rest. A balance scale compares two groups of coins "
    "via queries like 'Left: Coin 1, Coin 2, Coin 3; Right: Coin 4, Coin "
    "5, Coin 6' and returns 'Balance' or 'Imbalance' without saying which "
    "side is heavier. The scale lies once in a random turn in every 10 "
    "interactions, returning the opposite of the truth. Finally, identify "
    "the heavy coin in the form 'Heavy Coin X'.",
    _heavy_coin_setup, _heavy_coin_answer, _heavy_coin_step,
))
_puzzle(PuzzleKind(
    "number-guessing", "Easy",
    "Guess a secret integer randomly chosen from [0, 100]. Guess in the "
    "form 'Number X' (such as 'Number 10'); the reply is 'Close' if the "
    "absolute difference between your guess and the secret is less than "
    "or equal to 15, otherwise 'Far'. Finally, answer the secret in the "
    "form 'Number X'.",
    _number_setup, _number_answer, _number_step,
))
_puzzle(PuzzleKind(
    "wordle-hard-11", "Hard",
    "Wordle is a word-guessing game where players attempt to deduce a "
    "hidden 11-letter word (all uppercase). Each guess provides feedback: "
    "(1) Correct letter in the correct position, represented by 'A'; (2) "
    "Correct letter but misplaced, represented by 'M'; (3) Letter not in "
    "the word, represented by 'X'. Finally, give the 11-letter uppercase "
    "word answer directly.",
    _wordle_setup_for(11), _wordle_answer, _wordle_step,
))


_INTRO = """1. Task overview:
- The user plays the role of a puzzle, and you don't know what the hidden answer is. You need to guess the hidden answer by interacting with the user in multiple turns.

2. Goals:
- You need to guess the answer to the puzzle within given interaction turns.

3. User property:
- The user hides the answer which you need to figure out.

4. Interaction rules:
- Rule 0: The user will first tell you the rule of the puzzle, and the interaction format that must be followed when querying. In each turn, the user will tell *current turn* and *remaining turns*.
- Rule 1: You can ask questions according to the rules of the game and receive corresponding feedback. If your ask is unavailable, the user will tell you.
- Rule 2: After a series of interactions, you should answer the puzzle in the format specified in the description.

5. Output format:
- When you ask a question, you should strictly follow query format in the **Description**.
- When you answer the puzzle, you should strictly follow the answer format in the **Description**.
- If you figure out the right answer before given turns, keep interacting with the puzzle to make sure your answer is correct.

6. Evaluation:
- When the given number of interactions is reached, you need to give your answer of the puzzle. **You MUST ONLY output the answer itself in the format mentioned in the description, DO NOT contain more text.**"""


class PuzzleEnvironment(Environment):
    style = "puzzle"

    def __init__(self, spec: EnvironmentSpec, seed: int):
        self.kind = CATALOG[spec.id.split("/", 1)[1]]
        self.hidden: dict = {}
        self.stream = None
        self.weighings = 0
        self.lie_position = 0
        super().__init__(spec, seed)
        self.start_sample(0)

    def _build_test_set(self) -> list[TestSample]:
        samples = []
        for k in range(6):
            hidden = self.kind.setup(stable_rng(self.spec.id, self.seed, "hidden", k))
            samples.append(
                TestSample(f"puzzle {k + 1}", ExactMatch(self.kind.answer(hidden)))
            )
        return samples

    def start_sample(self, index: int) -> None:
        """Bind the puzzle instance for sample ``index``: fresh hidden
        answer and a fresh feedback-noise stream."""
        self.hidden = self.kind.setup(
            stable_rng(self.spec.id, self.seed, "hidden", index)
        )
        self.stream = stable_rng(self.spec.id, self.seed, "stream", index)
        self.weighings = 0
        self.lie_position = 0

    def preamble(self) -> str:
        return (
            _INTRO
            + f"\n\nNow Let's Solve the Puzzle {self.kind.id}.\n\n"
            + f"**Description**: {self.kind.description}"
        )

    def explore(self, query: str) -> str:
        return self.kind.step(self, query)

    def eval_question(self, index: int) -> str:
        return ""

    def hidden_markers(self) -> list[str]:
        return [self.kind.answer(self.hidden)]


def register_all() -> None:
    for name, kind in CATALOG.items():
        register(
            EnvironmentSpec(
                id=f"ipi/{name}",
                family="IPI",
                difficulty=kind.difficulty,
                description=kind.description,
                public_description=kind.description,
                default_test_count=6,
                factory=PuzzleEnvironment,
            )
        )
