"""Simultaneous-move games against fixed opponent strategies.

Exploration plays full games that do not count; evaluation replays the
same opponent at the test round counts and scores the ratio of the
realized total to the optimal total, clipped into [0, 1].  All catalog
opponents are open-loop (turn-indexed or seeded-random), so the optimal
total for deterministic opponents is an exact dynamic program over
(turn, own state) and, for stochastic ones, rounds times the best
per-round expectation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

from ..registry import Environment, EnvironmentSpec, GameSample, register
from ..seeding import stable_rng

RPS7_ELEMENTS = ("rock", "paper", "scissors", "fire", "water", "air", "sponge")

# Frozen tournament: every element beats exactly three and loses to three.
RPS7_BEATS = {
    "rock": {"scissors", "sponge", "fire"},
    "paper": {"rock", "water", "air"},
    "scissors": {"paper", "sponge", "air"},
    "fire": {"scissors", "paper", "sponge"},
    "water": {"rock", "fire", "scissors"},
    "air": {"fire", "rock", "water"},
    "sponge": {"water", "paper", "air"},
}

ANTI_RPS_ELEMENTS = ("rock", "paper", "scissors")
# Reversed classic rules: scissors beat rock, paper beats scissors,
# rock beats paper.
ANTI_RPS_BEATS = {
    "rock": {"paper"},
    "paper": {"scissors"},
    "scissors": {"rock"},
}


def outcome(beats: dict, a: str, b: str) -> int:
    """+1 if a beats b, -1 if a loses, 0 on a tie (for player a)."""
    if b in beats[a]:
        return 1
    if a in beats[b]:
        return -1
    return 0


MAX_BULLETS = 8

LsdAction = tuple[str, int]  # (kind, amount); amount 0 for load/scout


def lsd_resolve(a: LsdAction, b: LsdAction, bullets_a: int, bullets_b: int):
    """Resolve one simultaneous turn; returns (pa, pb, bullets_a', bullets_b').

    Shoot-vs-defend compares amounts (defend wins ties); shoot beats the
    passive actions; shoot-vs-shoot compares pre-action bullet counts; a
    turn with no shot scores 0 for both.
    """
    pa = pb = 0
    if a[0] == "shoot" and b[0] == "shoot":
        if bullets_a != bullets_b:
            pa = 1 if bullets_a > bullets_b else -1
            pb = -pa
    elif a[0] == "shoot":
        if b[0] == "defend":
            pa, pb = (-1, 1) if b[1] >= a[1] else (1, -1)
        else:
            pa, pb = 1, -1
    elif b[0] == "shoot":
        if a[0] == "defend":
            pb, pa = (-1, 1) if a[1] >= b[1] else (1, -1)
        else:
            pa, pb = -1, 1

    def update(action: LsdAction, bullets: int) -> int:
        if action[0] == "load":
            return min(MAX_BULLETS, bullets + 1)
        if action[0] in ("shoot", "defend"):
            return max(0, bullets - action[1])
        return bullets

    return pa, pb, update(a, bullets_a), update(b, bullets_b)


LSD_SCRIPTS = {
    "lsd-defender": (("load", 0), ("load", 0), ("defend", 2), ("load", 0), ("defend", 1)),
    "lsd-balance": (("load", 0), ("load", 0), ("shoot", 1), ("defend", 1)),
    "lsd-attacker": (("load", 0), ("load", 0), ("shoot", 2), ("load", 0), ("shoot", 1)),
}


@dataclass(frozen=True)
class OpponentStrategy:
    id: str
    game: str  # rps7 | anti-rps | lsd | cards
    deterministic: bool
    action: Callable = field(repr=False)  # (turn, rounds, rng) -> action


def _script_action(script):
    return lambda turn, rounds, rng: script[(turn - 1) % len(script)]


STRATEGIES: dict[str, OpponentStrategy] = {
    "rps7-random": OpponentStrategy(
        "rps7-random", "rps7", False,
        lambda turn, rounds, rng: rng.choice(("rock", "paper", "air")),
    ),
    "rps7-cycle": OpponentStrategy(
        "rps7-cycle", "rps7", True,
        lambda turn, rounds, rng: RPS7_ELEMENTS[(turn - 1) % 7],
    ),
    "lsd-defender": OpponentStrategy(
        "lsd-defender", "lsd", True, _script_action(LSD_SCRIPTS["lsd-defender"]),
    ),
    "cards-ascending-10": OpponentStrategy(
        "cards-ascending-10", "cards", True,
        lambda turn, rounds, rng: rounds if turn == 1 else turn - 1,
    ),
    "lsd-balance": OpponentStrategy(
        "lsd-balance", "lsd", True, _script_action(LSD_SCRIPTS["lsd-balance"]),
    ),
    "lsd-attacker": OpponentStrategy(
        "lsd-attacker", "lsd", True, _script_action(LSD_SCRIPTS["lsd-attacker"]),
    ),
    "anti-rps-random": OpponentStrategy(
        "anti-rps-random", "anti-rps", False,
        lambda turn, rounds, rng: rng.choice(("rock", "scissors")),
    ),
}


# --------------------------------------------------------------------------
# Optimal-score oracle.
# --------------------------------------------------------------------------

def element_expectation(beats: dict, elements, opponent_pool) -> dict[str, float]:
    return {
        a: sum(outcome(beats, a, b) for b in opponent_pool) / len(opponent_pool)
        for a in elements
    }


def _lsd_opponent_track(strategy_id: str, rounds: int):
    """Pre-action bullet count and action of the scripted opponent per turn."""
    script = LSD_SCRIPTS[strategy_id]
    bullets, track = 0, []
    for turn in range(1, rounds + 1):
        action = script[(turn - 1) % len(script)]
        track.append((action, bullets))
        _, _, _, bullets = lsd_resolve(("load", 0), action, 0, bullets)
    return track


@lru_cache(maxsize=None)
def _lsd_optimal(strategy_id: str, rounds: int, want_line: bool):
    track = _lsd_opponent_track(strategy_id, rounds)

    @lru_cache(maxsize=None)
    def best(turn: int, bullets: int):
        if turn > rounds:
            return 0, None
        opp_action, opp_bullets = track[turn - 1]
        candidates: list[LsdAction] = [("load", 0), ("scout", 0)]
        candidates += [("shoot", x) for x in range(1, bullets + 1)]
        candidates += [("defend", y) for y in range(1, bullets + 1)]
        top, pick = None, None
        for action in candidates:
            pa, _, mine, _ = lsd_resolve(action, opp_action, bullets, opp_bullets)
            value = pa + best(turn + 1, mine)[0]
            if top is None or value > top:
                top, pick = value, action
        return top, pick

    total = best(1, 0)[0]
    if not want_line:
        return float(total), None
    line, bullets = [], 0
    for turn in range(1, rounds + 1):
        action = best(turn, bullets)[1]
        line.append(action)
        opp_action, opp_bullets = track[turn - 1]
        _, _, bullets, _ = lsd_resolve(action, opp_action, bullets, opp_bullets)
    return float(total), tuple(line)


@lru_cache(maxsize=None)
def _cards_optimal(rounds: int, want_line: bool):
    opponent = [rounds] + list(range(1, rounds))

    @lru_cache(maxsize=None)
    def best(mask: int, turn: int):
        if turn > rounds:
            return 0, None
        top, pick = None, None
        for card in range(1, rounds + 1):
            bit = 1 << (card - 1)
            if not mask & bit:
                continue
            opp = opponent[turn - 1]
            points = (card > opp) - (card < opp)
            value = points + best(mask & ~bit, turn + 1)[0]
            if top is None or value > top:
                top, pick = value, card
        return top, pick

    full = (1 << rounds) - 1
    total = best(full, 1)[0]
    if not want_line:
        return float(total), None
    line, mask = [], full
    for turn in range(1, rounds + 1):
        card = best(mask, turn)[1]
        line.append(card)
        mask &= ~(1 << (card - 1))
    return float(total), tuple(line)


def optimal_score(strategy_id: str, rounds: int) -> float:
    """Best achievable (expected) total over ``rounds`` against the opponent."""
    strategy = STRATEGIES[strategy_id]
    if strategy.id == "rps7-random":
        per_round = max(
            element_expectation(RPS7_BEATS, RPS7_ELEMENTS, ("rock", "paper", "air")).values()
        )
        return rounds * per_round
    if strategy.id == "anti-rps-random":
        per_round = max(
            element_expectation(ANTI_RPS_BEATS, ANTI_RPS_ELEMENTS, ("rock", "scissors")).values()
        )
        return rounds * per_round
    if strategy.id == "rps7-cycle":
        return float(rounds)
    if strategy.game == "lsd":
        return _lsd_optimal(strategy_id, rounds, want_line=False)[0]
    if strategy.game == "cards":
        return _cards_optimal(rounds, want_line=False)[0]
    raise KeyError(strategy_id)


def optimal_line(strategy_id: str, rounds: int) -> list[str]:
    """An action sequence realizing the optimal total (deterministic
    opponents only), rendered as the texts a player would submit."""
    strategy = STRATEGIES[strategy_id]
    if not strategy.deterministic:
        raise ValueError(f"{strategy_id} is stochastic; no deterministic line")
    if strategy.id == "rps7-cycle":
        # Per opponent element, any element that beats it wins the round.
        line = []
        for turn in range(1, rounds + 1):
            opp = RPS7_ELEMENTS[(turn - 1) % 7]
            line.append(next(a for a in RPS7_ELEMENTS if opp in RPS7_BEATS[a]))
        return line
    if strategy.game == "lsd":
        _, actions = _lsd_optimal(strategy_id, rounds, want_line=True)
        return [a[0] if a[1] == 0 else f"{a[0]} {a[1]}" for a in actions]
    if strategy.game == "cards":
        _, cards = _cards_optimal(rounds, want_line=True)
        return [f"card {c}" for c in cards]
    raise KeyError(strategy_id)


def score_match(total: float, optimal: float) -> float:
    """Ratio accuracy; negative totals clip to zero."""
    if optimal <= 0:
        raise ValueError("optimal total must be positive")
    return min(1.0, max(0.0, total / optimal))


# --------------------------------------------------------------------------
# Live games.
# --------------------------------------------------------------------------

@dataclass
class StepResult:
    feedback: str
    done: bool
    invalid: bool = False


class BaseGame:
    action_hint = ""

    def __init__(self, rounds: int, strategy: OpponentStrategy, rng):
        self.rounds = rounds
        self.strategy = strategy
        self.rng = rng
        self.turn = 1
        self.total = 0
        self.last: Optional[tuple[str, str, int]] = None
        self.done = False

    # subclass surface -------------------------------------------------------
    def parse(self, text: str):
        raise NotImplementedError

    def invalid_message(self, text: str) -> str:
        raise NotImplementedError

    def resolve(self, action) -> tuple[int, str, str]:
        """Apply one simultaneous turn; returns (my points, my action
        rendered, opponent action as shown to the player)."""
        raise NotImplementedError

    def status_lines(self) -> list[str]:
        return []

    # engine ------------------------------------------------------------------
    def prompt(self) -> str:
        lines = [f"Turn {self.turn}/{self.rounds}", ""]
        if self.last is None:
            lines += ["This is the first turn.", ""]
        else:
            mine, opp, points = self.last
            lines += [
                f"In the last turn, you chose '{mine}' and the opponent chose "
                f"'{opp}'. You gained {points} point(s).",
                "",
            ]
        for status in self.status_lines():
            lines += [status, ""]
        lines.append(f"What is your action? {self.action_hint}")
        return "\n".join(lines)

    def step(self, text: str) -> StepResult:
        action = self.parse(text)
        if action is None:
            return StepResult(self.invalid_message(text), False, invalid=True)
        points, mine, opp = self.resolve(action)
        self.total += points
        self.last = (mine, opp, points)
        self.turn += 1
        if self.turn > self.rounds:
            self.done = True
            return StepResult(
                f"In the last turn, you chose '{mine}' and the opponent chose "
                f"'{opp}'. You gained {points} point(s).\n\n"
                f"The game is over. Your total score: {self.total}.",
                True,
            )
        return StepResult(self.prompt(), False)


class ElementsGame(BaseGame):
    def __init__(self, rounds, strategy, rng):
        super().__init__(rounds, strategy, rng)
        if strategy.game == "rps7":
            self.elements, self.beats = RPS7_ELEMENTS, RPS7_BEATS
        else:
            self.elements, self.beats = ANTI_RPS_ELEMENTS, ANTI_RPS_BEATS
        self.action_hint = "(e.g., " + ", ".join(f"`{e}`" for e in self.elements) + ")"

    def parse(self, text: str):
        cleaned = text.strip().strip("`'\"").lower()
        return cleaned if cleaned in self.elements else None

    def invalid_message(self, text: str) -> str:
        options = ", ".join(f"`{e}`" for e in self.elements)
        return (
            f"Invalid action type. Your action '{text}' is not recognized. "
            f"Please choose from {options}."
        )

    def resolve(self, action):
        opp = self.strategy.action(self.turn, self.rounds, self.rng)
        return outcome(self.beats, action, opp), action, opp


class LsdGame(BaseGame):
    action_hint = "(e.g., `load`, `scout`, `shoot 1`, `defend 2`)"

    def __init__(self, rounds, strategy, rng):
        super().__init__(rounds, strategy, rng)
        self.my_bullets = 0
        self.opp_bullets = 0
        self.scout_reveal: Optional[int] = None
        self.insufficient: Optional[str] = None

    def parse(self, text: str):
        cleaned = text.strip().strip("`'\"").lower()
        self.insufficient = None
        if cleaned in ("load", "scout"):
            return (cleaned, 0)
        match = re.fullmatch(r"(shoot|defend)\s+(\d+)", cleaned)
        if not match:
            return None
        kind, amount = match.group(1), int(match.group(2))
        if amount < 1:
            return None
        if amount > self.my_bullets:
            self.insufficient = (
                f"Invalid action. You cannot spend {amount} bullets when you "
                f"have {self.my_bullets}."
            )
            return None
        return (kind, amount)

    def invalid_message(self, text: str) -> str:
        if self.insufficient:
            return self.insufficient
        return (
            f"Invalid action type. Your action '{text}' is not recognized. "
            "Please choose from `load`, `scout`, `shoot x`, or `defend y`."
        )

    def status_lines(self):
        lines = [f"You have {self.my_bullets} bullets."]
        if self.scout_reveal is not None:
            lines.append(
                "Your scout last turn revealed that the opponent had "
                f"{self.scout_reveal} bullets before their action."
            )
        return lines

    def resolve(self, action):
        opp = self.strategy.action(self.turn, self.rounds, self.rng)
        reveal = self.opp_bullets if action[0] == "scout" else None
        pa, _, mine, theirs = lsd_resolve(
            action, opp, self.my_bullets, self.opp_bullets
        )
        self.my_bullets, self.opp_bullets = mine, theirs
        self.scout_reveal = reveal
        rendered = action[0] if action[1] == 0 else f"{action[0]} {action[1]}"
        # Opponent amounts stay hidden; only the action kind is revealed.
        return pa, rendered, opp[0]


class CardsGame(BaseGame):
    action_hint = "(e.g., `card 3`)"

    def __init__(self, rounds, strategy, rng):
        super().__init__(rounds, strategy, rng)
        self.hand = set(range(1, rounds + 1))
        self.unavailable: Optional[str] = None

    def parse(self, text: str):
        cleaned = text.strip().strip("`'\"").lower()
        self.unavailable = None
        match = re.fullmatch(r"card\s+(\d+)", cleaned)
        if not match:
            return None
        card = int(match.group(1))
        if card not in self.hand:
            self.unavailable = (
                f"Invalid action. Card {card} is not available in your hand."
            )
            return None
        return card

    def invalid_message(self, text: str) -> str:
        if self.unavailable:
            return self.unavailable
        return (
            f"Invalid action type. Your action '{text}' is not recognized. "
            "Please choose from your available cards in the form `card x`."
        )

    def status_lines(self):
        return [f"Your available cards: {sorted(self.hand)}."]

    def resolve(self, action):
        opp = self.strategy.action(self.turn, self.rounds, self.rng)
        self.hand.discard(action)
        points = (action > opp) - (action < opp)
        return points, f"card {action}", f"card {opp}"


_GAME_CLASSES = {"rps7": ElementsGame, "anti-rps": ElementsGame,
                 "lsd": LsdGame, "cards": CardsGame}


_INTRO = """1. Task overview:
- The user plays the role of an opponent who takes a fixed strategy in a game. But you don't know what the strategy is. You need to guess the hidden strategy of your opponent by interacting (playing game) with him in multiple turns.

2. Goals:
- You have 1 final goal: You need to guess your opponent's strategy and try to maximize your score in the game. The score might depend on winning rate, or minimal cost, etc.

3. User property:
- The user hides his game strategy which you need to figure out to win the game.

4. Interaction rules:
- To finish the goal, you need to interact with the user. The interaction rules are as follows:
  - Interaction Rule 0: The user will first tell you the rule of the game, and the interaction format that must be followed when playing. In each turn, the user will tell *current turn* and *remaining turns*.
  - Interaction Rule 1: You can take actions according to the rules of the game and receive corresponding feedback, such as current game states. If your action is unavailable, the user will tell you.
  - Interaction Rule 2: We will first play a few times of the game to familiarize you with the rules and the behavior of your opponent. In this phase, your actions will not be recorded, and your score does not matter. You can make use of this phase to explore the game and understand the opponent's strategy.
  - Interaction Rule 3: After the *exploration phase*, you will enter the *evaluation phase*. Your actions will be recorded, and your score will be calculated based on your actions.

5. Output format:
- **You must strictly obey the output format rules, DO NOT output any unrelated text!**

6. Evaluation:
- When the given number of interactions is reached, the game ends and we'll calculate your **score**"""

_RPS7_RULES = (
    "Rock, paper, scissors, fire, water, air, sponge is a hand game where "
    "players simultaneously choose between rock, paper, scissors, fire, "
    "water, air, sponge. Rock triumphs over three opponents: it smashes "
    "Scissors, crushes Sponge, and puts out Fire. Paper also defeats three: "
    "it covers Rock, floats on Water, and fans Air. Scissors have three "
    "victories: they cut Paper, shred Sponge, and can create a spark to "
    "start a Fire. Fire is victorious against three as well: it melts "
    "Scissors, burns Paper, and scorches Sponge. Water overcomes three "
    "challengers: it erodes Rock, extinguishes Fire, and rusts Scissors. "
    "Air has three wins: it blows out Fire, erodes Rock, and evaporates "
    "Water. Finally, Sponge defeats its three foes: it soaks up Water, "
    "cleans Paper (rendering it useless), and utilizes its pockets to "
    "contain Air. In the game, two players repeat [total_turns] times, each "
    "time the winner gets 1 point, the loser gets -1 point, and if they are "
    "tied, 0 point each. The goal is to maximize total scores."
)

_ANTI_RPS_RULES = (
    "This is a reversed version of Rock, Paper, Scissors. In the Anti Rock, "
    "Paper, Scissors game, the winning rules are exactly opposite to the "
    "original ones: scissors beat rock, paper beats scissors, and rock "
    "beats paper. In the game, two players repeat [total_turns] times, each "
    "time the winner gets 1 point, the loser gets -1 point, and if they are "
    "tied, 0 point each. The goal is to maximize total scores."
)

_LSD_RULES = (
    "In each turn, a player can choose `load`: gain one bullet, `scout`: "
    "see the opponent's bullet count, `shoot x`: spend x bullets to attack, "
    "or `defend y`: spend y bullets to defend. Then, actions and the "
    "gaining points of both players are revealed, but the specific "
    "numerical values x and y are kept hidden. Each player starts with 0 "
    "bullets and can hold a maximum of 8. x and y cannot exceed the number "
    "of bullets they have currently. If one player shoots x and the other "
    "defends y, the defense succeeds and the defender wins 1 point if "
    "y >= x, and the shooter wins -1 point. But if y < x, the attacker wins "
    "1 point and the defender wins -1 point. A Shoot action will always "
    "succeed against an opponent who chooses to Load or Scout. When a "
    "simultaneous shoot happens, the player with more bullets will win 1 "
    "point and the other win -1 point. The same bullets will result in a "
    "tie where both players win 0 point. When a simultaneous defend or "
    "scout or load happens, both players win 0 point. If a player scouts, "
    "he will receive the opponent's bullet number. The game lasts for "
    "[total_turns] turns, both players try to maximize their scores."
)

_CARDS_RULES = (
    "Comparing Cards is a game where two players play a card at the same "
    "time and compare the number. Initially, both players have "
    "[total_cards] cards, numbered from 1 to [total_cards]. In each turn, "
    "both players choose a card on his hand to play at the same time, in "
    "the form of `card x`, where x is the number on the card between 1 and "
    "[total_cards], and this card must be available. The player with the "
    "higher number wins the turn and earns 1 point, while the other player "
    "earns -1 point. If both players play the same number, then both "
    "players earn 0 points. The game lasts for [total_cards] turns, both "
    "players try to maximize their scores."
)

_RULES = {"rps7": _RPS7_RULES, "anti-rps": _ANTI_RPS_RULES,
          "lsd": _LSD_RULES, "cards": _CARDS_RULES}

_GAME_NAMES = {"rps7": "RPS7", "anti-rps": "Anti RPS",
               "lsd": "Load Shoot Defend", "cards": "Comparing Cards"}

# Strategy prose stays hidden from players; used for the hiding audit.
_STRATEGY_PROSE = {
    "rps7-random": "choose rock, paper, air with the same probability",
    "rps7-cycle": "cycling through rock, paper, scissors, fire, water, air, "
                  "sponge in order, starting with rock",
    "lsd-defender": "cycle through load, load, defend 2, load, defend 1",
    "cards-ascending-10": "first choose the highest card, then play cards in "
                          "ascending order",
    "lsd-balance": "keep cycling load, load, shoot 1, defend 1",
    "lsd-attacker": "repeat load, load, shoot 2, load, shoot 1",
    "anti-rps-random": "choose rock and scissors with the same probability",
}

_DIFFICULTY = {
    "rps7-random": "Easy",
    "rps7-cycle": "Easy",
    "lsd-defender": "Easy",
    "cards-ascending-10": "Easy",
    "lsd-balance": "Hard",
    "lsd-attacker": "Hard",
    "anti-rps-random": "Hard",
}


class GameEnvironment(Environment):
    style = "game"

    def __init__(self, spec: EnvironmentSpec, seed: int):
        self.strategy = STRATEGIES[spec.id.split("/", 1)[1]]
        self.game: Optional[BaseGame] = None
        super().__init__(spec, seed)

    def _build_test_set(self) -> list[GameSample]:
        rng = stable_rng(self.spec.id, self.seed, "tests")
        rounds = sorted(rng.sample(range(8, 16), 4))
        return [GameSample(n, optimal_score(self.strategy.id, n)) for n in rounds]

    def preamble(self) -> str:
        rules = _RULES[self.strategy.game]
        name = _GAME_NAMES[self.strategy.game]
        return (
            _INTRO
            + f"\n\nNow Let's Play the Game {name}, the Description Is that "
            + rules
        )

    # -- game lifecycle (driven by the session engine) ----------------------
    def begin_game(self, sample_index: int) -> str:
        rounds = self.samples[sample_index].rounds
        cls = _GAME_CLASSES[self.strategy.game]
        self.game = cls(rounds, self.strategy, self.rng)
        return self.game.prompt()

    def game_step(self, action: str) -> StepResult:
        return self.game.step(action)

    def game_total(self) -> int:
        return self.game.total

    def optimal(self, sample_index: int) -> float:
        return self.samples[sample_index].optimal

    def explore(self, query: str) -> str:
        raise NotImplementedError("game environments step through game_step")

    def hidden_markers(self) -> list[str]:
        return [self.strategy.id, _STRATEGY_PROSE[self.strategy.id]]


def register_all() -> None:
    for name, strategy in STRATEGIES.items():
        register(
            EnvironmentSpec(
                id=f"gsi/{name}",
                family="GSI",
                difficulty=_DIFFICULTY[name],
                description=_STRATEGY_PROSE[name],
                public_description=_RULES[strategy.game],
                default_test_count=4,
                factory=GameEnvironment,
            ),
            aliases=["gsi/cards-ascending"] if name == "cards-ascending-10" else [],
        )
