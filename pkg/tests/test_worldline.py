import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aitlab.errors import SpecError
from aitlab.worldline import Eternal, PhaseSlope, build_phase_function, eval_phase, eval_phase_rate, uniform_trajectory

FIG1 = dict(v0=1.041, v1=1.070, T1=9.74350, T2=1305.413)


def fd_rate(pf, tau, h=1e-4):
    return (eval_phase(pf, tau + h) - eval_phase(pf, tau - h)) / (2 * h)


def test_fig1_first_acceleration():
    spec = PhaseSlope(**FIG1)
    assert spec.a1 == pytest.approx(0.029 / 9.74350, rel=1e-12)
    assert spec.a1 == pytest.approx(2.9763e-3, rel=1e-4)


def test_v2_defaults_to_v0_and_is_logged(caplog):
    with caplog.at_level(logging.INFO, logger="aitlab.worldline"):
        spec = PhaseSlope(**FIG1)
    assert spec.v2 == spec.v0
    assert "v2 not given" in caplog.text


def test_inertial_limit_is_linear():
    v = 1.041
    pf = build_phase_function(PhaseSlope(v, v, 3.0, 8.0, v))
    assert eval_phase(pf, 2.0) == pytest.approx(2.082, rel=1e-14)
    for tau in np.linspace(-20, 30, 51):
        assert eval_phase(pf, tau) == pytest.approx(v * tau, rel=1e-13, abs=1e-13)


def test_origin():
    assert eval_phase(build_phase_function(PhaseSlope(**FIG1, v2=0.4575)), 0.0) == 0.0


@pytest.mark.parametrize("v2", [None, 0.4575, 1.2])
def test_c1_continuity_at_breakpoints(v2):
    pf = build_phase_function(PhaseSlope(**FIG1, v2=v2))
    for i, x in enumerate(pf.breakpoints):
        left, right = pf.segments[i], pf.segments[i + 1]
        assert abs(left.value(x) - right.value(x)) <= 1e-12 * max(1.0, abs(right.value(x)))
        assert abs(left.rate(x) - right.rate(x)) <= 1e-12


@pytest.mark.parametrize("v2", [None, 0.4575])
def test_rate_matches_profile_at_midpoints(v2):
    spec = PhaseSlope(**FIG1, v2=v2)
    pf = build_phase_function(spec)

    def profile(t):
        if t < 0:
            return spec.v0
        if t < spec.T1:
            return spec.v0 + spec.a1 * t
        if t < spec.T2:
            return spec.v1 + spec.a2 * (t - spec.T1)
        return spec.v2

    for t in (-50.0, 0.5 * spec.T1, 0.5 * (spec.T1 + spec.T2), spec.T2 + 100.0):
        assert eval_phase_rate(pf, t) == pytest.approx(profile(t), rel=1e-14)
        assert fd_rate(pf, t) == pytest.approx(profile(t), rel=1e-8)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.1, 10), st.floats(-100, 1500))
def test_linear_in_k(c, tau):
    spec = PhaseSlope(**FIG1, v2=0.4575)
    base = eval_phase(build_phase_function(spec, 1.0), tau)
    scaled = eval_phase(build_phase_function(spec, c), tau)
    assert scaled == pytest.approx(c * base, rel=1e-12, abs=1e-12)


def test_uniform_trajectory_values():
    assert uniform_trajectory(2.0, 0.0) == (0.0, 0.5)
    t, z = uniform_trajectory(1.0, 1.0)
    assert t == pytest.approx(1.1752012, abs=1e-7)
    assert z == pytest.approx(1.5430806, abs=1e-7)


def test_uniform_trajectory_hyperbola():
    rng = np.random.default_rng(7)
    for a, tau in zip(rng.uniform(0.05, 5, 100), rng.uniform(-3, 3, 100)):
        t, z = uniform_trajectory(a, tau)
        assert abs(z * z - t * t - 1 / a**2) <= 1e-13 * (z * z + t * t)


def test_eternal_phase_is_light_cone_coordinate():
    a, k = 0.7, 1.3
    pf = build_phase_function(Eternal(a), k)
    for tau in (-2.0, 0.0, 1.5):
        t, z = uniform_trajectory(a, tau)
        assert eval_phase(pf, tau) == pytest.approx(k * (t - z), rel=1e-12)


@pytest.mark.parametrize("kw", [dict(T1=0.0), dict(T2=5.0), dict(v1=math.nan)])
def test_invalid_specs(kw):
    params = {**FIG1, **kw}
    with pytest.raises(SpecError):
        PhaseSlope(**params)


def test_invalid_eternal_and_k():
    with pytest.raises(SpecError):
        Eternal(0.0)
    with pytest.raises(SpecError):
        build_phase_function(PhaseSlope(**FIG1), k=-1.0)
