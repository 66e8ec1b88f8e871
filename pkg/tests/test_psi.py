"""Physics scene tests: logged coordinate vectors, RK4 accuracy against
closed forms, and mechanical invariants checked before rounding."""

import math

import pytest

from boxbench.envs.psi import (
    CATALOG,
    StateCache,
    position_at,
    render_coordinates,
    rk4_step,
)
from boxbench.registry import instantiate


def scene_cache(name):
    scene = CATALOG[name]
    return scene, (StateCache(scene) if scene.kind == "Integrated" else None)


CONICAL_VECTORS = [
    (0.0, (2.5, 0.0, -4.33)),
    (1.0, (1.19, 2.2, -4.33)),
    (2.0, (-1.37, 2.09, -4.33)),
    (3.0, (-2.49, -0.21, -4.33)),
    (4.0, (-1.01, -2.29, -4.33)),
    (5.0, (1.53, -1.97, -4.33)),
]


@pytest.mark.parametrize("t,expected", CONICAL_VECTORS)
def test_conical_pendulum_logged_values(t, expected):
    scene, cache = scene_cache("conical-pendulum")
    assert position_at(scene, t, cache) == {"object1": expected}


def test_conical_pendulum_radius_invariant():
    scene, cache = scene_cache("conical-pendulum")
    radius_sq = (5 * math.sin(math.radians(30))) ** 2
    for t10 in range(0, 200, 7):
        x, y, _ = scene.objects_at(t10 / 10)["object1"]
        assert abs(x * x + y * y - radius_sq) < 1e-9


def test_horizontal_projectile_starts_at_origin():
    scene, cache = scene_cache("horizontal-projectile")
    assert position_at(scene, 0.0) == {"object1": (0.0, 0.0, 0.0)}


def test_rk4_exact_on_constant_derivative():
    deriv = lambda state, t: (3.0, -2.0)
    assert rk4_step(deriv, (1.0, 1.0), 0.0, 0.1) == (1.3, 0.8)


def test_rk4_simple_harmonic_vs_analytic():
    # x'' = -100 x from x(0) = -0.2 at rest; closed form -0.2 cos(10 t).
    deriv = lambda s, t: (s[1], -100.0 * s[0])
    state, t, dt = (-0.2, 0.0), 0.0, 0.01
    worst = 0.0
    for step in range(1000):
        state = rk4_step(deriv, state, t, dt)
        t = (step + 1) * dt
        worst = max(worst, abs(state[0] - (-0.2 * math.cos(10 * t))))
    assert worst < 1e-3


def test_rk4_fourth_order_convergence():
    deriv = lambda s, t: (s[1], -100.0 * s[0])

    def error(dt):
        state, steps = (-0.2, 0.0), round(1.0 / dt)
        for i in range(steps):
            state = rk4_step(deriv, state, i * dt, dt)
        return abs(state[0] - (-0.2 * math.cos(10.0)))

    # Halving the step should shrink the global error ~16x.
    ratio = error(0.02) / error(0.01)
    assert 10 < ratio < 24


ENERGY_CASES = ["pendulum-60", "double-pendulum"]


def pendulum_energy(state):
    theta, omega = state
    return 0.5 * (2.0 * omega) ** 2 - 10.0 * 2.0 * math.cos(theta)


def double_pendulum_energy(state):
    t1, w1, t2, w2 = state
    kinetic = 0.5 * w1 * w1 + 0.5 * (
        w1 * w1 + w2 * w2 + 2 * w1 * w2 * math.cos(t1 - t2)
    )
    potential = -10.0 * (2 * math.cos(t1) + math.cos(t2))
    return kinetic + potential


@pytest.mark.parametrize(
    "name,energy", [("pendulum-60", pendulum_energy),
                    ("double-pendulum", double_pendulum_energy)]
)
def test_frictionless_energy_drift(name, energy):
    scene, cache = scene_cache(name)
    initial = energy(scene.initial)
    for t10 in range(1, 201):  # the sampled-test horizon, t in (0, 20]
        drift = abs(energy(cache.state_at(t10 / 10)) - initial) / abs(initial)
        assert drift < 0.005


def test_double_pendulum_initial_geometry():
    scene, cache = scene_cache("double-pendulum")
    coords = position_at(scene, 0.0, cache)
    s, c = math.sin(math.radians(45)), math.cos(math.radians(45))
    assert coords["object1"] == (round(s, 2), 0.0, round(-c, 2))
    assert coords["object2"] == (round(2 * s, 2), 0.0, round(-2 * c, 2))


def test_free_fall_elastic_periodic_and_bounded():
    scene, _ = scene_cache("free-fall-elastic")
    period = 2 * math.sqrt(2 * 10 / 10)
    for t10 in range(0, 300, 3):
        t = t10 / 10
        h = scene.objects_at(t)["object1"][2]
        h_shift = scene.objects_at(t + period)["object1"][2]
        assert -1e-9 <= h <= 10 + 1e-9
        assert abs(h - h_shift) < 1e-9


def test_inelastic_bounce_decays_to_rest():
    scene, _ = scene_cache("inelastic-bounce")
    assert scene.objects_at(0.0)["object1"][2] == 20.0
    # Total flight time is 2 + sum of geometric bounce durations = 8 s.
    assert scene.objects_at(9.0)["object1"][2] == 0.0
    peak_after_first_bounce = max(
        scene.objects_at(t / 10)["object1"][2] for t in range(20, 45)
    )
    assert peak_after_first_bounce <= 20 * 0.36 + 1e-9


def test_friction_oscillator_sticks():
    scene, cache = scene_cache("harmonic-with-friction")
    stuck = cache.state_at(50.0)
    assert stuck[1] == 0.0
    assert abs(100.0 * stuck[0]) <= 1.0  # inside the friction cone
    assert cache.state_at(99.0) == stuck


def test_air_resistance_reaches_terminal_velocity():
    scene, cache = scene_cache("ball-air-resistance")
    terminal = -math.sqrt(10.0 / 0.05)
    assert abs(cache.state_at(20.0)[1] - terminal) < 0.05


def test_render_rounding():
    assert render_coordinates({"object1": (-0.0001, 2.1988, -4.330127)}) == {
        "object1": (0.0, 2.2, -4.33)
    }


def test_environment_step_and_judge():
    env = instantiate("psi/conical-pendulum", seed=5)
    assert env.explore("0") == "{'object1': (2.5, 0.0, -4.33)}"
    assert env.explore("1.0") == "{'object1': (1.19, 2.2, -4.33)}"
    assert "Invalid input" in env.explore("1.55")
    assert "Invalid input" in env.explore("-1")
    assert "Invalid input" in env.explore("abc")
    for k, sample in enumerate(env.samples):
        assert env.judge(k, sample.expected.truth_text())
        assert not env.judge(k, "{'object1': (999.0, 0.0, 0.0)}")


def test_judge_tolerance():
    env = instantiate("psi/horizontal-projectile", seed=1)
    sample = env.samples[0]
    truth = eval(sample.expected.truth_text())["object1"]
    near = {"object1": (truth[0] + 0.009, truth[1], truth[2] - 0.009)}
    far = {"object1": (truth[0] + 0.02, truth[1], truth[2])}
    assert env.judge(0, repr(near))
    assert not env.judge(0, repr(far))


def test_analytic_scene_purity():
    env = instantiate("psi/free-fall-infinite", seed=2)
    assert env.explore("3.3") == env.explore("3.3")
