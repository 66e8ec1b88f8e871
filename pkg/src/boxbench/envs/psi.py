"""Mechanical-system environments: time query -> 3-D object coordinates.

Scenes with closed forms evaluate them directly; the rest advance a
classical fixed-step RK4 integrator (dt = 0.1 s) from t = 0, memoizing
states at step boundaries.  All coordinates are reported rounded to two
decimal places; g = 10 m/s^2 throughout.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass, field
from typing import Callable

from ..registry import Environment, EnvironmentSpec, NumericMapMatch, TestSample, register
from ..seeding import stable_rng

G = 10.0
DT = 0.1
MAX_SIM_TIME = 100.0

State = tuple[float, ...]


def rk4_step(deriv: Callable[[State, float], State], state: State, t: float,
             dt: float = DT) -> State:
    k1 = deriv(state, t)
    k2 = deriv(tuple(s + dt / 2 * d for s, d in zip(state, k1)), t + dt / 2)
    k3 = deriv(tuple(s + dt / 2 * d for s, d in zip(state, k2)), t + dt / 2)
    k4 = deriv(tuple(s + dt * d for s, d in zip(state, k3)), t + dt)
    return tuple(
        s + dt / 6 * (a + 2 * b + 2 * c + d)
        for s, a, b, c, d in zip(state, k1, k2, k3, k4)
    )


@dataclass
class Scene:
    id: str
    difficulty: str
    description: str
    kind: str  # Analytic | Integrated
    positions: Callable = field(repr=False)  # analytic: t -> coords
    initial: State = ()
    deriv: Callable = field(default=None, repr=False)
    state_positions: Callable = field(default=None, repr=False)
    post_step: Callable = field(default=None, repr=False)

    def objects_at(self, t: float, cache: "StateCache" = None) -> dict:
        if self.kind == "Analytic":
            return self.positions(t)
        return self.state_positions(cache.state_at(t))


class StateCache:
    """Memoized integrator states at multiples of dt for one instance."""

    def __init__(self, scene: Scene):
        self.scene = scene
        self._states = [scene.initial]
        self._lock = threading.Lock()

    def state_at(self, t: float) -> State:
        steps = round(t / DT)
        with self._lock:
            while len(self._states) <= steps:
                i = len(self._states) - 1
                state = rk4_step(self.scene.deriv, self._states[-1], i * DT)
                if self.scene.post_step is not None:
                    state = self.scene.post_step(self._states[-1], state)
                self._states.append(state)
            return self._states[steps]


def _round2(v: float) -> float:
    r = round(v, 2)
    return 0.0 if r == 0 else r


def render_coordinates(objects: dict) -> dict:
    return {name: tuple(_round2(v) for v in xyz) for name, xyz in objects.items()}


# -- analytic scenes ----------------------------------------------------------

def _harmonic_horizontal(t: float) -> dict:
    return {"object1": (-0.2 * math.cos(10 * t), 0.0, 0.0)}


def _harmonic_vertical(t: float) -> dict:
    # Origin at the initial position; displacement -0.2 m along the spring
    # axis at t = 0, so the object first moves toward +z.
    return {"object1": (0.0, 0.0, 0.2 - 0.2 * math.cos(10 * t))}


def _oblique_projectile(t: float) -> dict:
    return {"object1": (10 * t, 0.0, 10 * t - 5 * t * t)}


def _conical_pendulum(t: float) -> dict:
    length, theta = 5.0, math.radians(30)
    omega = math.sqrt(G * math.tan(theta) / length)
    radius = length * math.sin(theta)
    return {
        "object1": (
            radius * math.cos(omega * t),
            radius * math.sin(omega * t),
            -length * math.cos(theta),
        )
    }


_ELASTIC_HALF_PERIOD = math.sqrt(2 * 10.0 / G)  # drop height 10 m


def _free_fall_elastic(t: float) -> dict:
    tau = math.fmod(t, 2 * _ELASTIC_HALF_PERIOD)
    if tau > _ELASTIC_HALF_PERIOD:
        tau = 2 * _ELASTIC_HALF_PERIOD - tau
    return {"object1": (0.0, 0.0, 10.0 - 5 * tau * tau)}


def _free_fall_infinite(t: float) -> dict:
    return {"object1": (0.0, 0.0, -5 * t * t)}


def _horizontal_projectile(t: float) -> dict:
    return {"object1": (10 * t, 0.0, -5 * t * t)}


def _inelastic_bounce(t: float) -> dict:
    # Drop from 20 m, coefficient of restitution 0.6; closed-form segment
    # walk over successive parabolic arcs until the motion dies out.
    if t < 2.0:
        return {"object1": (0.0, 0.0, 20.0 - 5 * t * t)}
    rest = t - 2.0
    v = 20.0 * 0.6
    while v > 1e-9:
        duration = 2 * v / G
        if rest < duration:
            return {"object1": (0.0, 0.0, v * rest - 5 * rest * rest)}
        rest -= duration
        v *= 0.6
    return {"object1": (0.0, 0.0, 0.0)}


# -- integrated scenes --------------------------------------------------------

def _pendulum_deriv(state: State, t: float) -> State:
    theta, omega = state
    return (omega, -(G / 2.0) * math.sin(theta))


def _pendulum_positions(state: State) -> dict:
    theta = state[0]
    return {"object1": (2.0 * math.sin(theta), 0.0, -2.0 * math.cos(theta))}


def _friction_deriv(state: State, t: float) -> State:
    x, v = state
    friction = -math.copysign(1.0, v) if v else 0.0  # mu * m * g = 1 N, m = 1
    return (v, -100.0 * x + friction)


def _friction_post(prev: State, new: State) -> State:
    # Coulomb stick: once the speed crosses zero with the spring force
    # inside the friction cone (|kx| <= mu m g), the block stays put.
    if prev[1] == 0.0 and abs(100.0 * prev[0]) <= 1.0:
        return prev
    crossed = new[1] == 0.0 or (prev[1] != 0.0 and (prev[1] > 0) != (new[1] > 0))
    if crossed and abs(100.0 * new[0]) <= 1.0:
        return (new[0], 0.0)
    return new


def _friction_positions(state: State) -> dict:
    return {"object1": (state[0], 0.0, 0.0)}


def _double_pendulum_deriv(state: State, t: float) -> State:
    # Point masses m1 = m2 = 1 on rigid rods L1 = L2 = 1.
    t1, w1, t2, w2 = state
    delta = t1 - t2
    denom = 1.0 + math.sin(delta) ** 2  # m1 + m2 sin^2(delta)
    a1 = (
        -math.sin(delta) * (w1 * w1 * math.cos(delta) + w2 * w2)
        + G * (math.sin(t2) * math.cos(delta) - 2 * math.sin(t1))
    ) / denom
    a2 = (
        math.sin(delta) * (w2 * w2 * math.cos(delta) + 2 * w1 * w1)
        + 2 * G * (math.sin(t1) * math.cos(delta) - math.sin(t2))
    ) / denom
    return (w1, a1, w2, a2)


def _double_pendulum_positions(state: State) -> dict:
    t1, _, t2, _ = state
    x1, z1 = math.sin(t1), -math.cos(t1)
    return {
        "object1": (x1, 0.0, z1),
        "object2": (x1 + math.sin(t2), 0.0, z1 - math.cos(t2)),
    }


def _air_resistance_deriv(state: State, t: float) -> State:
    z, v = state
    return (v, -G - 0.05 * v * abs(v))  # f = 0.1 v^2, m = 2 kg


def _air_resistance_positions(state: State) -> dict:
    return {"object1": (0.0, 0.0, state[0])}


CATALOG: dict[str, Scene] = {}


def _scene(scene: Scene) -> None:
    CATALOG[scene.id] = scene


_scene(Scene(
    "simple-harmonic-horizontal", "Easy",
    "Horizontal frictionless oscillator, m = 1 kg, k = 100 N/m, released "
    "from rest 0.2 m into the contracted state; origin at equilibrium.",
    "Analytic", _harmonic_horizontal,
))
_scene(Scene(
    "simple-harmonic-vertical", "Easy",
    "Vertical oscillator, m = 1 kg, k = 100 N/m, g = 10, released from "
    "rest 0.2 m into the contracted state; origin at the initial position.",
    "Analytic", _harmonic_vertical,
))
_scene(Scene(
    "oblique-projectile", "Easy",
    "Projectile launched with 10 m/s horizontal and 10 m/s vertical "
    "velocity from an infinite height; origin at the launch point.",
    "Analytic", _oblique_projectile,
))
_scene(Scene(
    "pendulum-60", "Easy",
    "Pendulum of length 2 m released from rest at 60 degrees; the exact "
    "equation of motion is integrated (no small-angle approximation).",
    "Integrated", None,
    initial=(math.radians(60), 0.0),
    deriv=_pendulum_deriv,
    state_positions=_pendulum_positions,
))
_scene(Scene(
    "conical-pendulum", "Easy",
    "Conical pendulum, string length 5 m at 30 degrees from the vertical; "
    "origin at the ceiling attachment point.",
    "Analytic", _conical_pendulum,
))
_scene(Scene(
    "free-fall-elastic", "Easy",
    "Ball dropped from 10 m onto a perfectly elastic ground; origin at "
    "ground level.",
    "Analytic", _free_fall_elastic,
))
_scene(Scene(
    "free-fall-infinite", "Easy",
    "Ball dropped from an infinite height; origin at the release point.",
    "Analytic", _free_fall_infinite,
))
_scene(Scene(
    "horizontal-projectile", "Easy",
    "Projectile launched horizontally at 10 m/s from an infinite height; "
    "origin at the launch point.",
    "Analytic", _horizontal_projectile,
))
_scene(Scene(
    "inelastic-bounce", "Easy",
    "Ball dropped from 20 m bouncing with coefficient of restitution 0.6; "
    "origin at ground level.",
    "Analytic", _inelastic_bounce,
))
_scene(Scene(
    "harmonic-with-friction", "Hard",
    "Horizontal oscillator, m = 1 kg, k = 100 N/m, released from rest 1 m "
    "into the contracted state on a surface with dynamic friction 0.1; "
    "sticks when the speed crosses zero inside the friction cone.",
    "Integrated", None,
    initial=(-1.0, 0.0),
    deriv=_friction_deriv,
    state_positions=_friction_positions,
    post_step=_friction_post,
))
_scene(Scene(
    "double-pendulum", "Hard",
    "Double pendulum, two 1 kg bobs on 1 m rods, both released from rest "
    "at 45 degrees; origin at the upper pivot.",
    "Integrated", None,
    initial=(math.radians(45), 0.0, math.radians(45), 0.0),
    deriv=_double_pendulum_deriv,
    state_positions=_double_pendulum_positions,
))
_scene(Scene(
    "ball-air-resistance", "Hard",
    "Ball of 2 kg thrown vertically up at 15 m/s with air resistance "
    "f = 0.1 v^2; it keeps falling past the launch height.",
    "Integrated", None,
    initial=(0.0, 15.0),
    deriv=_air_resistance_deriv,
    state_positions=_air_resistance_positions,
))


_INTRO = """1. Task overview:
- The user plays the role of a classical mechanical system, but you don't know what it is. You need to understand how this classical mechanical system operates by interacting with the user in multiple turns.

2. Goal:
- By interacting with the user within given interaction turns, you need to understand how the mechanical system operates.

3. User property:
- The user will remind you the remaining number of turns in each turn.
- The user takes time `t: float` as input.
- The user return the 3-dimensional coordinate `(x, y, z)` of each object in time `t`.

4. Interaction rules:
- Rule 1: You need to assign a value of `t`. You can only assign one `t` in each turn. Make sure the assigned `t` is a one-digit decimal.
- Rule 2: You will receive the user response, which is 3-dimensional coordinate `(x, y, z)` of each object in time `t`, after you assign specific `t`.

5. Output format:
- You must strictly obey the output format rules: When you want to assign value for `t`, **only output the value**. DO NOT output any unrelated text or symbols.

6. Evaluation:
- When the given number of interactions is reached, you need to calculate the 3-dimensional coordinate `(x, y, z)` of each object at time `t` with the format of `{"object1": (x, y, z), "object2": (x, y, z), ...}`. All coordinates are approximated to two decimal places."""

_TIME_PATTERN = re.compile(r"^\d+(\.\d)?$")


def position_at(scene: Scene, t: float, cache: StateCache = None) -> dict:
    """Rounded coordinate map at time t (t a non-negative 0.1 s multiple)."""
    return render_coordinates(scene.objects_at(t, cache))


class SceneEnvironment(Environment):
    style = "function"

    def __init__(self, spec: EnvironmentSpec, seed: int):
        self.scene = CATALOG[spec.id.split("/", 1)[1]]
        self.cache = StateCache(self.scene) if self.scene.kind == "Integrated" else None
        super().__init__(spec, seed)

    def _build_test_set(self) -> list[TestSample]:
        rng = stable_rng(self.spec.id, self.seed, "tests")
        ticks = rng.sample(range(5, 201), 6)  # t in [0.5, 20.0], excludes t = 0
        samples = []
        for tick in sorted(ticks):
            t = tick / 10
            expected = position_at(self.scene, t, self.cache)
            samples.append(TestSample(f"{t:.1f}", NumericMapMatch(expected)))
        return samples

    def preamble(self) -> str:
        return _INTRO

    def explore(self, query: str) -> str:
        text = query.strip()
        if not _TIME_PATTERN.fullmatch(text):
            return (
                "Invalid input. Please assign a single non-negative time "
                "value t with at most one decimal digit (e.g. 1.5)."
            )
        t = float(text)
        if t > MAX_SIM_TIME:
            return f"Invalid input. t must be within 0 to {MAX_SIM_TIME:g}."
        return repr(position_at(self.scene, t, self.cache))

    def eval_question(self, index: int) -> str:
        return (
            "Now answer the question: What is the coordinate of each object "
            f"at time {self.samples[index].input}?"
        )

    def hidden_markers(self) -> list[str]:
        return [self.scene.description]


def register_all() -> None:
    for name, scene in CATALOG.items():
        register(
            EnvironmentSpec(
                id=f"psi/{name}",
                family="PSI",
                difficulty=scene.difficulty,
                description=scene.description,
                public_description=(
                    "A hidden classical mechanical system maps a time point "
                    "to the 3-D coordinates of its objects."
                ),
                default_test_count=6,
                factory=SceneEnvironment,
            )
        )
