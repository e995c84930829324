import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aitlab.amplitudes import (
    Window,
    amplitude_analytic,
    amplitude_numeric,
    amplitude_pair,
    default_window,
    eternal_unruh_amplitude,
    extend_tails,
    hyperbolic_amplitude_numeric,
    unruh_transition_probability,
    window_stability,
)
from aitlab.errors import SpecError, UnsupportedWorldline
from aitlab.specfun import QuadPhase
from aitlab.worldline import Eternal, PhaseFunction, PhaseSlope, Segment, build_phase_function

FIG1 = dict(v0=1.041, v1=1.070, T1=9.74350, T2=1305.413)


def rel(a, b):
    return abs(a - b) / abs(b)


def inertial(v, T1=3.0, T2=8.0):
    return build_phase_function(PhaseSlope(v, v, T1, T2, v))


def linear_form(q, lo, hi):
    return (cmath.exp(1j * q * hi) - cmath.exp(1j * q * lo)) / (1j * q)


# ---- inertial closed forms

def test_resonant_minus_amplitude_is_window_length():
    v = 1.041
    w = Window(-2.0, 11.0)
    assert amplitude_analytic(inertial(v), v, "-", w) == pytest.approx(13.0, abs=1e-12)


@pytest.mark.parametrize("omega", [0.3, 0.9, 2.5])
def test_inertial_elementary_forms(omega):
    v = 1.041
    w = Window(-2.0, 11.0)
    ap = amplitude_pair(inertial(v), omega, w)
    assert rel(ap.i_minus, linear_form(omega - v, w.tau_min, w.tau_max)) < 1e-12
    assert rel(ap.i_plus, linear_form(omega + v, w.tau_min, w.tau_max)) < 1e-12


def test_numeric_constant_integrand():
    seg = (Segment(-math.inf, 0.0, 0.0, QuadPhase(0, 0, 0)), Segment(0.0, 1.0, 0.0, QuadPhase(0, 0, 0)),
           Segment(1.0, 2.0, 1.0, QuadPhase(0, 0, 0)), Segment(2.0, math.inf, 2.0, QuadPhase(0, 0, 0)))
    pf = PhaseFunction(1.0, seg)
    assert amplitude_numeric(pf, 0.0, "+", Window(0.0, 5.0)) == pytest.approx(5.0, abs=1e-12)


def test_adiabatic_inertial_is_window_free():
    # the eps -> 0+ regularized linear-phase integral over all tau vanishes off resonance
    pf = inertial(1.041)
    for w in (default_window(pf.spec, switching="adiabatic"), Window(-50, 90, "adiabatic")):
        assert abs(amplitude_analytic(pf, 0.4, "-", w)) < 1e-12


# ---- analytic vs numeric oracle

def _random_case(rng):
    v0 = rng.uniform(0.3, 1.5)
    v1 = v0 + rng.uniform(-0.3, 0.3)
    v2 = rng.uniform(0.3, 1.5)
    T1 = rng.uniform(1, 30)
    T2 = T1 + rng.uniform(5, 150)
    spec = PhaseSlope(v0, v1, T1, T2, v2)
    switching = rng.choice(["sharp", "cosine", "adiabatic"])
    pad = rng.uniform(0.05, 0.5) * T2
    ramp = 0.5 * pad if switching == "cosine" else 0.0
    w = Window(-pad, T2 + pad, str(switching), ramp)
    omega = rng.uniform(0.01, 2.0)
    return build_phase_function(spec, rng.uniform(0.5, 2.0)), omega, w


def test_analytic_matches_numeric_random():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(200):
        pf, omega, w = _random_case(rng)
        for sign in "+-":
            a = amplitude_analytic(pf, omega, sign, w)
            n = amplitude_numeric(pf, omega, sign, w)
            worst = max(worst, abs(a - n) / abs(n))
    assert worst < 1e-6


@pytest.mark.parametrize("switching", ["sharp", "adiabatic"])
def test_fig1_worldline_coarse_grid(switching):
    spec = PhaseSlope(**FIG1, v2=0.4575)
    pf = build_phase_function(spec)
    w = default_window(spec, switching=switching)
    for omega in (0.003, 0.00755, 0.02, 0.05):
        for sign in "+-":
            a = amplitude_analytic(pf, omega, sign, w)
            n = amplitude_numeric(pf, omega, sign, w)
            assert rel(a, n) < 1e-6


def test_tolerance_halving_within_error_estimate():
    spec = PhaseSlope(**FIG1, v2=0.4575)
    pf = build_phase_function(spec)
    w = default_window(spec)
    v1, e1 = amplitude_numeric(pf, 0.01, "+", w, abs_tol=1e-8, rel_tol=1e-6, full_output=True)
    v2, e2 = amplitude_numeric(pf, 0.01, "+", w, abs_tol=5e-9, rel_tol=5e-7, full_output=True)
    assert abs(v1 - v2) <= e1 + e2


def test_eternal_not_supported_by_piecewise_path():
    pf = build_phase_function(Eternal(1.0))
    with pytest.raises(UnsupportedWorldline):
        amplitude_analytic(pf, 1.0, "+", Window(-1, 1))


def test_window_must_contain_accelerated_interval():
    pf = build_phase_function(PhaseSlope(**FIG1))
    with pytest.raises(SpecError):
        amplitude_analytic(pf, 0.01, "+", Window(1.0, 2000.0))


# ---- symmetries

@settings(max_examples=40, deadline=None)
@given(st.floats(-10, 10), st.floats(0.001, 0.1))
def test_global_phase_invariance(offset, omega):
    spec = PhaseSlope(**FIG1, v2=0.4575)
    pf = build_phase_function(spec)
    w = default_window(spec, switching="adiabatic")
    ap, sp = amplitude_pair(pf, omega, w), amplitude_pair(pf.shifted(offset), omega, w)
    assert abs(sp.i_minus) == pytest.approx(abs(ap.i_minus), rel=1e-12)
    assert abs(sp.i_plus) == pytest.approx(abs(ap.i_plus), rel=1e-12)


@pytest.mark.parametrize("switching", ["sharp", "cosine", "adiabatic"])
def test_conjugation_symmetry(switching):
    spec = PhaseSlope(**FIG1, v2=0.4575)
    pf = build_phase_function(spec)
    w = default_window(spec, switching=switching, ramp_width=50.0 if switching == "cosine" else 0.0)
    for omega in (0.004, 0.03):
        assert amplitude_analytic(pf, -omega, "+", w) == pytest.approx(
            amplitude_analytic(pf, omega, "-", w).conjugate(), rel=1e-10)
        assert amplitude_analytic(pf, -omega, "-", w) == pytest.approx(
            amplitude_analytic(pf, omega, "+", w).conjugate(), rel=1e-10)


def test_sign_flip_of_phase_exchanges_amplitudes():
    spec = PhaseSlope(**FIG1, v2=0.4575)
    pf = build_phase_function(spec)
    neg = PhaseFunction(1.0, tuple(
        Segment(s.start, s.end, s.origin, QuadPhase(-s.phase.q0, -s.phase.q1, -s.phase.q2)) for s in pf.segments))
    w = default_window(spec, switching="adiabatic")
    a, b = amplitude_pair(pf, 0.01, w), amplitude_pair(neg, 0.01, w)
    assert b.i_minus == pytest.approx(a.i_plus, rel=1e-12)
    assert b.i_plus == pytest.approx(a.i_minus, rel=1e-12)


def test_adiabatic_dip_is_window_stable():
    spec = PhaseSlope(**FIG1, v2=0.4575)
    pf = build_phase_function(spec)
    w = default_window(spec, switching="adiabatic")
    assert window_stability(pf, 0.0075519, w) < 1e-6
    assert extend_tails(w, pf).tau_min == pytest.approx(2 * w.tau_min)


# ---- eternal acceleration

@pytest.mark.parametrize("a", [0.5, 1.0, 3.0])
@pytest.mark.parametrize("x", [0.1, 0.7, 2.0, 5.0])
def test_detailed_balance(a, x):
    omega = x * a
    ratio = abs(eternal_unruh_amplitude(-omega, a)) ** 2 / abs(eternal_unruh_amplitude(omega, a)) ** 2
    assert ratio == pytest.approx(math.exp(-2 * math.pi * omega / a), rel=1e-9)


def test_planck_ratio():
    a = 1.3
    excite = lambda om: abs(eternal_unruh_amplitude(-om, a)) ** 2  # noqa: E731
    for o1, o2 in ((0.2, 1.0), (0.5, 3.0), (1.1, 6.0)):
        want = unruh_transition_probability(o1, a) / unruh_transition_probability(o2, a)
        assert excite(o1) / excite(o2) == pytest.approx(want, rel=1e-9)


def test_large_gap_decay_slope():
    a = 1.0
    xs = np.linspace(6, 12, 7)
    # |Gamma(ix)|^2 e^{-pi x} x = 2 pi/(e^{2 pi x} - 1): strip the algebraic x factor
    y = [math.log(x * abs(eternal_unruh_amplitude(-x * a, a)) ** 2) for x in xs]
    slope = np.polyfit(xs, y, 1)[0]
    assert slope == pytest.approx(-2 * math.pi, rel=0.01)


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
def test_hyperbolic_quadrature_matches_closed_form_shape(x):
    a = 1.0
    num = abs(hyperbolic_amplitude_numeric(x * a, a, "+")) ** 2
    closed = abs(eternal_unruh_amplitude(-x * a, a)) ** 2
    assert num / (16 * math.pi**3 * closed) == pytest.approx(1.0, rel=1e-4)


def test_unruh_probability_values():
    assert unruh_transition_probability(1 / (2 * math.pi), 1.0) == pytest.approx(
        4 * math.pi**2 / (math.e - 1), rel=1e-14)
    assert unruh_transition_probability(1 / (2 * math.pi), 1.0) == pytest.approx(22.97552, abs=1e-5)
    vals = [unruh_transition_probability(om, 1.0) for om in np.linspace(0.1, 20, 50)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert 0 < unruh_transition_probability(50.0, 1.0) < 1e-130
