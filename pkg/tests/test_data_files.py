"""The committed parameter files are the canonical record of each
environment's frozen constants; these tests keep code and data in sync."""

import json
import math
from importlib import resources

from boxbench.envs import eri
from boxbench.envs.psi import CATALOG as PSI_CATALOG
from boxbench.envs.psi import DT, G, MAX_SIM_TIME


def _data(name):
    return json.loads(
        resources.files("boxbench.data").joinpath(name).read_text()
    )


def test_scene_file_matches_catalog():
    data = _data("scenes.json")
    assert data["gravity_m_s2"] == G
    assert data["integrator"]["time_step_s"] == DT
    assert data["integrator"]["max_time_s"] == MAX_SIM_TIME
    assert set(data["scenes"]) == set(PSI_CATALOG)
    for name, entry in data["scenes"].items():
        assert entry["kind"] == PSI_CATALOG[name].kind


def test_scene_file_initial_conditions():
    scenes = _data("scenes.json")["scenes"]
    pendulum = PSI_CATALOG["pendulum-60"]
    assert pendulum.initial[0] == math.radians(
        scenes["pendulum-60"]["initial_angle_deg"]
    )
    friction = PSI_CATALOG["harmonic-with-friction"]
    assert friction.initial[0] == scenes["harmonic-with-friction"][
        "initial_displacement_m"
    ]
    double = PSI_CATALOG["double-pendulum"]
    assert [double.initial[0], double.initial[2]] == [
        math.radians(a) for a in scenes["double-pendulum"]["initial_angles_deg"]
    ]
    ball = PSI_CATALOG["ball-air-resistance"]
    assert ball.initial[1] == scenes["ball-air-resistance"]["initial_velocity_m_s"]


def test_cipher_file_matches_catalog():
    data = _data("ciphers.json")
    assert set(data) == set(eri.CATALOG)
    for name, entry in data.items():
        config = eri.CATALOG[name]
        assert entry["kind"] == config.kind, name
        assert entry["difficulty"] == config.difficulty, name
        assert entry["parameters"] == config.parameters, name


def test_cipher_file_space_contracts():
    data = _data("ciphers.json")
    for name, entry in data.items():
        encrypt = eri.CATALOG[name].encrypt
        if entry["spaces"] == "kept":
            assert encrypt("ab cd")[2] == " ", name
        else:
            # Input spaces are ignored entirely (curve ciphers may still
            # emit their own group-separator spaces).
            assert encrypt("a b") == encrypt("ab"), name
