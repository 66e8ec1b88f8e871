"""Environment abstraction and registry.

Every black-box family plugs into the same contract: a spec entry, a
seeded live instance with an ``explore`` step, a test set fixed at
instantiation, and a judge.  The session engine in :mod:`boxbench.protocol`
drives instances only through this surface.
"""

from __future__ import annotations

import ast
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .errors import NotFound
from .seeding import stable_rng

FAMILIES = ("CII", "CRI", "PSI", "ERI", "IPI", "GSI")

# Number of evaluation samples per family (CII varies 30/35 by program).
DEFAULT_TEST_COUNTS = {"CRI": 10, "PSI": 6, "ERI": 8, "IPI": 6, "GSI": 4}


@dataclass(frozen=True)
class EnvironmentSpec:
    """Registry entry for one black-box.

    ``description`` is the internal rule text and may spell out the hidden
    mechanism; it never leaves the process through session surfaces.
    ``public_description`` is what players may see (game/puzzle rules are
    public, cipher/scene/program rules are not).
    """

    id: str
    family: str
    difficulty: str
    description: str
    public_description: str
    default_test_count: int
    factory: Callable[["EnvironmentSpec", int], "Environment"] = field(repr=False)

    def public_dict(self) -> dict:
        return {
            "id": self.id,
            "family": self.family,
            "difficulty": self.difficulty,
            "description": self.public_description,
            "default_test_count": self.default_test_count,
        }


class Matcher:
    """Decides whether an answer text matches a sample's expected output."""

    def matches(self, answer: str) -> bool:
        raise NotImplementedError

    def truth_text(self) -> str:
        """A rendering of the truth that must satisfy :meth:`matches`."""
        raise NotImplementedError


class ExactMatch(Matcher):
    def __init__(self, expected: str):
        self.expected = expected

    def matches(self, answer: str) -> bool:
        return answer.strip() == self.expected

    def truth_text(self) -> str:
        return self.expected


class BitListMatch(Matcher):
    """Accepts any 0/1 sequence punctuation; the bit order must be exact."""

    def __init__(self, bits: list[int]):
        self.bits = list(bits)

    def matches(self, answer: str) -> bool:
        got = [int(c) for c in answer if c in "01"]
        return got == self.bits

    def truth_text(self) -> str:
        return "[" + ", ".join(str(b) for b in self.bits) + "]"


class NumericMapMatch(Matcher):
    """Object-name -> coordinate tuple comparison with absolute tolerance."""

    def __init__(self, expected: dict[str, tuple], tol: float = 0.01):
        self.expected = expected
        self.tol = tol

    def matches(self, answer: str) -> bool:
        try:
            got = ast.literal_eval(answer.strip())
        except (ValueError, SyntaxError):
            return False
        if not isinstance(got, dict) or set(got) != set(self.expected):
            return False
        for name, truth in self.expected.items():
            value = got[name]
            if not isinstance(value, (tuple, list)) or len(value) != len(truth):
                return False
            for a, b in zip(value, truth):
                if not isinstance(a, (int, float)) or isinstance(a, bool):
                    return False
                if math.isnan(a) or abs(a - b) > self.tol + 1e-12:
                    return False
        return True

    def truth_text(self) -> str:
        return repr(self.expected)


@dataclass(frozen=True)
class TestSample:
    """One evaluation sample: a rendered input plus an answer matcher."""

    input: str
    expected: Matcher


@dataclass(frozen=True)
class GameSample:
    """GSI evaluation sample: a round count scored against an optimal total."""

    rounds: int
    optimal: float


class Environment:
    """A seeded live black-box instance.

    ``style`` selects the interaction pattern the session engine applies:

    * ``function`` - one shared exploration phase, then K judged samples
      (CII, CRI, PSI, ERI).
    * ``puzzle``   - K blocks, each a fresh hidden answer explored for T
      turns and then answered (IPI).
    * ``game``     - K blocks of full games against a fixed opponent,
      scored by ratio to the optimal total (GSI).
    """

    style = "function"

    def __init__(self, spec: EnvironmentSpec, seed: int):
        self.spec = spec
        self.seed = seed
        self.rng = stable_rng(spec.id, seed, "env")
        self.samples = self._build_test_set()

    # -- construction -----------------------------------------------------
    def _build_test_set(self) -> list:
        raise NotImplementedError

    # -- exploration -------------------------------------------------------
    def preamble(self) -> str:
        """Family task introduction plus the instance's public description."""
        raise NotImplementedError

    def explore(self, query: str) -> str:
        raise NotImplementedError

    # -- evaluation ---------------------------------------------------------
    def test_count(self) -> int:
        return len(self.samples)

    def eval_question(self, index: int) -> str:
        raise NotImplementedError

    def judge(self, index: int, answer: str) -> bool:
        sample = self.samples[index]
        return sample.expected.matches(answer)

    # -- audit ----------------------------------------------------------------
    def hidden_markers(self) -> list[str]:
        """Strings that must never appear in a response before stage Done."""
        return []


_REGISTRY: dict[str, EnvironmentSpec] = {}
_ALIASES: dict[str, str] = {}


def register(spec: EnvironmentSpec, aliases: Iterable[str] = ()) -> EnvironmentSpec:
    if spec.id in _REGISTRY:
        raise ValueError(f"duplicate environment id {spec.id!r}")
    _REGISTRY[spec.id] = spec
    for alias in aliases:
        _ALIASES[alias] = spec.id
    return spec


def _ensure_loaded() -> None:
    if not _REGISTRY:
        from . import envs  # noqa: F401  (registration side effects)

        envs.register_all()


def list_environments(
    family: Optional[str] = None, difficulty: Optional[str] = None
) -> list[EnvironmentSpec]:
    _ensure_loaded()
    specs = [
        s
        for s in _REGISTRY.values()
        if (family is None or s.family == family)
        and (difficulty is None or s.difficulty == difficulty)
    ]
    return sorted(specs, key=lambda s: s.id)


def get_spec(env_id: str) -> EnvironmentSpec:
    _ensure_loaded()
    resolved = _ALIASES.get(env_id, env_id)
    try:
        return _REGISTRY[resolved]
    except KeyError:
        raise NotFound(f"unknown environment id {env_id!r}") from None


def instantiate(env_id: str, seed: int) -> Environment:
    spec = get_spec(env_id)
    return spec.factory(spec, seed)


def catalog_json(
    family: Optional[str] = None, difficulty: Optional[str] = None
) -> str:
    """Catalog dump: a JSON list of public spec entries."""
    return json.dumps(
        [s.public_dict() for s in list_environments(family, difficulty)], indent=2
    )
