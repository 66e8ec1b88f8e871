"""Scripted solvers.

Each solver encodes the known rule of one environment and drives a full
session end-to-end, which proves the protocol path: an oracle solver
must reach accuracy 1.0 on its environment.  Solvers recompute answers
from the rule itself (independent re-implementations small enough to
audit by eye), never by reaching into environment internals.
"""

from __future__ import annotations

import ast
import math
import random
import re
import string

ANSWER_MARKERS = (
    "Now answer the question:",
    "answer the output of the gates",
    "Output the Answer DIRECTLY",
)

_RETRY = "Your answer is wrong. Try again."


def _is_answer_prompt(prompt: str) -> bool:
    return any(marker in prompt for marker in ANSWER_MARKERS)


class Solver:
    def respond(self, prompt: str) -> str:
        raise NotImplementedError


class FunctionSolver(Solver):
    """Shared skeleton for function-style families: probe during
    exploration, compute the answer when a question appears."""

    def __init__(self):
        self.last_answer = ""

    def probe(self, prompt: str) -> str:
        raise NotImplementedError

    def answer(self, prompt: str) -> str:
        raise NotImplementedError

    def respond(self, prompt: str) -> str:
        if _is_answer_prompt(prompt):
            self.last_answer = self.answer(prompt)
            return self.last_answer
        if _RETRY in prompt:
            return self.last_answer
        return self.probe(prompt)


class CaesarOracle(FunctionSolver):
    """Knows the rule of eri/caesar-8: shift 8, case kept, spaces dropped."""

    def probe(self, prompt: str) -> str:
        return "abc"

    def answer(self, prompt: str) -> str:
        plaintext = re.search(r"input plaintext is '(.*)'\?", prompt).group(1)
        out = []
        for c in plaintext:
            if c == " ":
                continue
            table = string.ascii_lowercase if c.islower() else string.ascii_uppercase
            out.append(table[(table.index(c) + 8) % 26])
        return "".join(out)


class SwapCircuitOracle(FunctionSolver):
    """Knows cri/swap-9: gates copy wires 6..9 then wires 1..5."""

    def probe(self, prompt: str) -> str:
        return "(0, 0, 0, 0, 0, 0, 0, 0, 0)"

    def answer(self, prompt: str) -> str:
        bits_text = re.search(r"given the input \[([01, ]+)\]", prompt).group(1)
        bits = [int(b) for b in bits_text.replace(",", " ").split()]
        outputs = bits[5:] + bits[:5]
        return "[" + ", ".join(str(b) for b in outputs) + "]"


class XorSequenceCircuitOracle(FunctionSolver):
    """Knows cri/xor-sequence-8 at the gate level: each prefix-xor stage
    expands to NOT b, NOT a, a AND (NOT b), (NOT a) AND b, OR."""

    def probe(self, prompt: str) -> str:
        return "(0, 0, 0, 0, 0, 0, 0, 0)"

    def answer(self, prompt: str) -> str:
        bits_text = re.search(r"given the input \[([01, ]+)\]", prompt).group(1)
        bits = [int(b) for b in bits_text.replace(",", " ").split()]
        outputs = []
        prev = bits[0]
        for wire in bits[1:]:
            not_b = 1 - wire
            not_a = 1 - prev
            left = prev & not_b
            right = not_a & wire
            prev = left | right
            outputs += [not_b, not_a, left, right, prev]
        return "[" + ", ".join(str(b) for b in outputs) + "]"


class ConicalPendulumOracle(FunctionSolver):
    """Knows psi/conical-pendulum: uniform circular motion with
    omega = sqrt(g tan(theta) / L)."""

    def probe(self, prompt: str) -> str:
        return "0"

    def answer(self, prompt: str) -> str:
        t = float(re.search(r"at time ([0-9.]+)\?", prompt).group(1))
        length, theta, g = 5.0, math.radians(30), 10.0
        omega = math.sqrt(g * math.tan(theta) / length)
        radius = length * math.sin(theta)
        coords = (
            radius * math.cos(omega * t),
            radius * math.sin(omega * t),
            -length * math.cos(theta),
        )
        rounded = tuple(0.0 if round(v, 2) == 0 else round(v, 2) for v in coords)
        return repr({"object1": rounded})


class QuicksortOracle(FunctionSolver):
    """Knows cii/quicksort: last-element pivot, <=-partition, and the
    three checkpoint placements."""

    def __init__(self):
        super().__init__()
        self.probes = ["arr = [3, 1, 2]", "(1, 1)"]

    def probe(self, prompt: str) -> str:
        if self.probes:
            return self.probes.pop(0)
        return "(1, 1)"

    @staticmethod
    def trace(arr):
        visits = {1: [], 2: [], 3: []}

        def qs(arr):
            if len(arr) <= 1:
                return list(arr)
            p = arr[-1]
            visits[1].append({"arr": list(arr), "p": p})
            l, r = [], []
            for i in range(len(arr) - 1):
                (l if arr[i] <= p else r).append(arr[i])
            visits[2].append(
                {"arr": list(arr), "p": p, "l": list(l), "r": list(r), "i": i}
            )
            s = qs(l) + [p] + qs(r)
            visits[3].append(
                {"arr": list(arr), "p": p, "l": list(l), "r": list(r), "i": i,
                 "s": list(s)}
            )
            return s

        qs(list(arr))
        return visits

    def answer(self, prompt: str) -> str:
        match = re.search(
            r"blackbox are (\{.*?\}), what's the value for (\w+) at "
            r"checkpoint \((\d+), (\d+)\)\?",
            prompt,
        )
        inputs = ast.literal_eval(match.group(1))
        name, idx, visit = match.group(2), int(match.group(3)), int(match.group(4))
        snapshot = self.trace(inputs["arr"])[idx][visit - 1]
        return repr(snapshot[name])


class BattleshipOracle(Solver):
    """Solves ipi/battleship-solo deterministically within 9 probes:
    diagonal probes identify the index, one off-diagonal probe decides
    row versus column."""

    def __init__(self):
        self.reset()

    def reset(self):
        self.pending = None        # coordinates awaiting feedback
        self.diag = 1              # next diagonal index to probe
        self.index = None          # identified row/column index
        self.orientation = None

    def respond(self, prompt: str) -> str:
        if "A New Puzzle Starts" in prompt:
            self.reset()
        if self.pending is not None and ("hits" in prompt or "misses" in prompt):
            hit = "hits" in prompt
            x, y = self.pending
            self.pending = None
            if x == y:
                if hit:
                    self.index = x
            elif self.index is not None:
                self.orientation = "Row" if hit else "Column"
        if _is_answer_prompt(prompt):
            if self.index is None:
                self.index = 9  # no diagonal hit in 1..8
            if self.orientation is None:
                self.orientation = "Row"
            return f"{self.orientation} {self.index}"
        return self.next_probe()

    def next_probe(self) -> str:
        if self.index is None and self.diag <= 8:
            self.pending = (self.diag, self.diag)
            self.diag += 1
        elif self.index is None:
            # Diagonal exhausted: the index is 9; disambiguate directly.
            self.index = 9
            self.pending = (9, 1)
        elif self.orientation is None:
            other = 9 if self.index != 9 else 1
            self.pending = (self.index, other)
        else:
            self.pending = (1, 1)  # burn remaining turns
        return f"({self.pending[0]}, {self.pending[1]})"


class RandomGuesser(Solver):
    """Deterministic pseudo-random number guesses; a floor baseline."""

    def __init__(self):
        self.rng = random.Random(0)

    def respond(self, prompt: str) -> str:
        return f"Number {self.rng.randint(0, 100)}"


_TURN = re.compile(r"Turn (\d+)/(\d+)")


class GameLineSolver(Solver):
    """Plays a fixed per-round action line, restarting on every 'Turn 1/n'."""

    def __init__(self, line_for_rounds):
        self.line_for_rounds = line_for_rounds
        self.line = []

    def respond(self, prompt: str) -> str:
        matches = _TURN.findall(prompt)
        if not matches:
            return "ok"
        turn, rounds = (int(x) for x in matches[-1])
        if turn == 1:
            self.line = self.line_for_rounds(rounds)
        return self.line[turn - 1]


def _optimal_line_solver(strategy_id: str):
    from ..envs.gsi import optimal_line

    return lambda: GameLineSolver(lambda rounds: optimal_line(strategy_id, rounds))


def _stationary_solver(action: str):
    return lambda: GameLineSolver(lambda rounds: [action] * rounds)


SOLVERS = {
    "caesar-oracle": CaesarOracle,
    "swap-circuit-oracle": SwapCircuitOracle,
    "xor-circuit-oracle": XorSequenceCircuitOracle,
    "conical-pendulum-oracle": ConicalPendulumOracle,
    "quicksort-oracle": QuicksortOracle,
    "battleship-oracle": BattleshipOracle,
    "random-guesser": RandomGuesser,
    "cards-ascending-optimal": _optimal_line_solver("cards-ascending-10"),
    "rps7-cycle-optimal": _optimal_line_solver("rps7-cycle"),
    "lsd-defender-optimal": _optimal_line_solver("lsd-defender"),
    "lsd-balance-optimal": _optimal_line_solver("lsd-balance"),
    "lsd-attacker-optimal": _optimal_line_solver("lsd-attacker"),
    "rps7-random-best": _stationary_solver("paper"),
    "anti-rps-random-best": _stationary_solver("scissors"),
}

# The environment each oracle solver is built for.
ORACLE_TARGETS = {
    "caesar-oracle": "eri/caesar-8",
    "swap-circuit-oracle": "cri/swap-9",
    "xor-circuit-oracle": "cri/xor-sequence-8",
    "conical-pendulum-oracle": "psi/conical-pendulum",
    "quicksort-oracle": "cii/quicksort",
    "battleship-oracle": "ipi/battleship-solo",
    "cards-ascending-optimal": "gsi/cards-ascending-10",
    "rps7-cycle-optimal": "gsi/rps7-cycle",
    "lsd-defender-optimal": "gsi/lsd-defender",
    "lsd-balance-optimal": "gsi/lsd-balance",
    "lsd-attacker-optimal": "gsi/lsd-attacker",
}
