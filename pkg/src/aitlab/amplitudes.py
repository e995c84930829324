"""Transition amplitudes I+-(Omega, k) = int dtau exp(i Omega tau +- i pi(tau)).

The integral runs over a finite proper-time :class:`Window`. How the window
edges are treated is a property of the window:

``sharp``
    hard cut at tau_min / tau_max.
``cosine``
    raised-cosine switching of width ``ramp_width`` inside each edge.
``adiabatic``
    the inertial tails beyond the window are kept and regularized by
    exp(-eps|tau|), eps -> 0+. For a linear tail phase with rate c this
    contributes exp(i phi(edge))/(i c) (lower) and -exp(i phi(edge))/(i c)
    (upper), so the result does not depend on where the edges sit.

Amplitudes are stored without the coupling constant.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ConvergenceError, DegenerateError, SpecError, UnsupportedWorldline
from .quadrature import adaptive_quad
from .specfun import QuadPhase, complex_gamma, quad_phase_integral
from .worldline import PhaseFunction, PhaseSlope, WorldlineSpec, eval_phase_rate

__all__ = [
    "Window",
    "AmplitudePair",
    "default_window",
    "extend_tails",
    "amplitude_analytic",
    "amplitude_numeric",
    "amplitude_pair",
    "window_stability",
    "eternal_unruh_amplitude",
    "hyperbolic_amplitude_numeric",
    "unruh_transition_probability",
]

SWITCHING_MODES = ("sharp", "cosine", "adiabatic")
_RESONANCE_TOL = 1e-12

Sign = Union[int, str]


@dataclass(frozen=True)
class Window:
    tau_min: float
    tau_max: float
    switching: str = "sharp"
    ramp_width: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.tau_min) and math.isfinite(self.tau_max)):
            raise SpecError("window limits must be finite")
        if not self.tau_min < self.tau_max:
            raise SpecError(f"window needs tau_min < tau_max, got [{self.tau_min}, {self.tau_max}]")
        if self.switching not in SWITCHING_MODES:
            raise SpecError(f"switching must be one of {SWITCHING_MODES}, got {self.switching!r}")
        if self.switching == "cosine":
            if not 0 < self.ramp_width <= 0.5 * (self.tau_max - self.tau_min):
                raise SpecError("cosine switching needs 0 < ramp_width <= half the window")

    @property
    def length(self) -> float:
        return self.tau_max - self.tau_min


@dataclass(frozen=True)
class AmplitudePair:
    i_minus: complex
    i_plus: complex
    omega: float
    k: float
    window: Window

    def __post_init__(self):
        for v in (self.i_minus, self.i_plus):
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise DegenerateError("amplitude pair must be finite")

    @property
    def abs2_minus(self) -> float:
        return abs(self.i_minus) ** 2

    @property
    def abs2_plus(self) -> float:
        return abs(self.i_plus) ** 2


def _sign(sign: Sign) -> int:
    if sign in ("+", 1, +1.0):
        return 1
    if sign in ("-", -1, -1.0):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def default_window(spec: WorldlineSpec, pad_fraction: float = 0.1,
                   switching: str = "sharp", ramp_width: float = 0.0) -> Window:
    """[-pad, T2 + pad] with pad = pad_fraction * T2."""
    if not isinstance(spec, PhaseSlope):
        raise SpecError("default_window needs a PhaseSlope worldline")
    pad = pad_fraction * spec.T2
    return Window(-pad, spec.T2 + pad, switching, ramp_width)


def extend_tails(w: Window, pf: PhaseFunction, factor: float = 2.0) -> Window:
    """Window whose inertial tails (outside the accelerated interval) are ``factor`` times longer."""
    lo_edge, hi_edge = pf.breakpoints[0], pf.breakpoints[-1]
    lo_len = lo_edge - w.tau_min
    hi_len = w.tau_max - hi_edge
    return Window(lo_edge - factor * lo_len, hi_edge + factor * hi_len, w.switching, w.ramp_width)


def _check_window(pf: PhaseFunction, w: Window) -> None:
    if pf.is_eternal:
        return
    lo, hi = pf.breakpoints[0], pf.breakpoints[-1]
    if w.tau_min > lo or w.tau_max < hi:
        raise SpecError(
            f"window [{w.tau_min}, {w.tau_max}] must contain the accelerated interval [{lo}, {hi}]"
        )
    if w.switching == "cosine":
        if w.tau_min + w.ramp_width > lo or w.tau_max - w.ramp_width < hi:
            raise SpecError("cosine ramps must lie inside the inertial tails")


def _tail_terms(pf: PhaseFunction, omega: float, s: int, w: Window) -> complex:
    first, last = pf.segments[0], pf.segments[-1]
    c_lo = omega + s * first.phase.q1
    c_hi = omega + s * last.phase.q1
    scale = abs(omega) + pf.mode_k
    if abs(c_lo) < _RESONANCE_TOL * scale or abs(c_hi) < _RESONANCE_TOL * scale:
        raise DegenerateError("inertial tail is resonant with the gap; amplitude is a delta function")
    phi_lo = omega * w.tau_min + s * first.value(w.tau_min)
    phi_hi = omega * w.tau_max + s * last.value(w.tau_max)
    return cmath.exp(1j * phi_lo) / (1j * c_lo) - cmath.exp(1j * phi_hi) / (1j * c_hi)


def _piece_integral(p: QuadPhase, origin: float, a: float, b: float, w: Window) -> complex:
    """Integral over [a, b] of exp(i p(tau - origin)) times the switching function."""
    if w.switching != "cosine":
        return quad_phase_integral(p, a - origin, b - origin)
    pieces = sorted({a, b, *(x for x in (w.tau_min + w.ramp_width, w.tau_max - w.ramp_width) if a < x < b)})
    total = 0j
    kappa = math.pi / w.ramp_width
    for lo, hi in zip(pieces[:-1], pieces[1:]):
        m = 0.5 * (lo + hi)
        if m < w.tau_min + w.ramp_width:
            anchor = w.tau_min
        elif m > w.tau_max - w.ramp_width:
            anchor = w.tau_max
        else:
            total += quad_phase_integral(p, lo - origin, hi - origin)
            continue
        # chi = 1/2 - (exp(i kappa (tau-anchor)) + exp(-i kappa (tau-anchor)))/4
        total += 0.5 * quad_phase_integral(p, lo - origin, hi - origin)
        for sgn in (1.0, -1.0):
            shifted = QuadPhase(p.q0 + sgn * kappa * (origin - anchor), p.q1 + sgn * kappa, p.q2)
            total -= 0.25 * quad_phase_integral(shifted, lo - origin, hi - origin)
    return total


def amplitude_analytic(pf: PhaseFunction, omega: float, sign: Sign, w: Window) -> complex:
    """Closed-form I+- for a piecewise-quadratic phase, summed segment by segment."""
    if pf.is_eternal:
        raise UnsupportedWorldline("eternal acceleration goes through eternal_unruh_amplitude")
    _check_window(pf, w)
    s = _sign(sign)
    total = 0j
    for seg in pf.segments:
        a = max(seg.start, w.tau_min)
        b = min(seg.end, w.tau_max)
        if b <= a:
            continue
        p = seg.phase
        total_phase = QuadPhase(omega * seg.origin + s * p.q0, omega + s * p.q1, s * p.q2)
        total += _piece_integral(total_phase, seg.origin, a, b, w)
    if w.switching == "adiabatic":
        total += _tail_terms(pf, omega, s, w)
    return total


def _phase_array(pf: PhaseFunction, tau: np.ndarray) -> np.ndarray:
    if pf.is_eternal:
        return -pf.mode_k * np.exp(-pf.eternal_a * tau) / pf.eternal_a
    out = np.empty_like(tau)
    for seg in pf.segments:
        m = (tau >= seg.start) & (tau < seg.end)
        u = tau[m] - seg.origin
        out[m] = seg.phase.q0 + u * (seg.phase.q1 + u * seg.phase.q2)
    return out


def _switch_array(w: Window, tau: np.ndarray) -> np.ndarray:
    if w.switching != "cosine":
        return np.ones_like(tau)
    chi = np.ones_like(tau)
    lo = tau < w.tau_min + w.ramp_width
    hi = tau > w.tau_max - w.ramp_width
    chi[lo] = 0.5 - 0.5 * np.cos(math.pi * (tau[lo] - w.tau_min) / w.ramp_width)
    chi[hi] = 0.5 - 0.5 * np.cos(math.pi * (w.tau_max - tau[hi]) / w.ramp_width)
    return chi


def _max_rate(pf: PhaseFunction, w: Window) -> float:
    if pf.is_eternal:
        return max(eval_phase_rate(pf, w.tau_min), eval_phase_rate(pf, w.tau_max))
    rates = [abs(seg.rate(x)) for seg in pf.segments for x in (max(seg.start, w.tau_min), min(seg.end, w.tau_max))
             if max(seg.start, w.tau_min) <= min(seg.end, w.tau_max)]
    return max(rates)


def amplitude_numeric(
    pf: PhaseFunction,
    omega: float,
    sign: Sign,
    w: Window,
    *,
    abs_tol: float = 1e-10,
    rel_tol: float = 1e-8,
    max_oscillations: float = 2e5,
    full_output: bool = False,
):
    """I+- by adaptive Gauss-Kronrod quadrature of the integrand itself.

    The window is split at the phase breakpoints and ramp edges; each piece
    starts with enough panels to resolve its oscillations.

    Returns the complex amplitude, or ``(value, error_estimate)`` when
    ``full_output`` is true.

    Raises
    ------
    ConvergenceError
        If the oscillation count exceeds ``max_oscillations`` or the
        quadrature does not converge.
    """
    _check_window(pf, w)
    s = _sign(sign)
    rate = abs(omega) + _max_rate(pf, w)
    n_osc = rate * w.length / (2 * math.pi)
    if n_osc > max_oscillations:
        raise ConvergenceError(f"{n_osc:.3g} oscillations exceeds budget {max_oscillations:g}")

    def f(tau):
        return np.exp(1j * (omega * tau + s * _phase_array(pf, tau))) * _switch_array(w, tau)

    cuts = {w.tau_min, w.tau_max}
    cuts.update(x for x in pf.breakpoints if w.tau_min < x < w.tau_max)
    if w.switching == "cosine":
        cuts.update((w.tau_min + w.ramp_width, w.tau_max - w.ramp_width))
    cuts = sorted(cuts)
    total = 0j
    err = 0.0
    n_pieces = len(cuts) - 1
    for a, b in zip(cuts[:-1], cuts[1:]):
        panels = int(rate * (b - a) / math.pi) + 1
        v, e = adaptive_quad(f, a, b, abs_tol=abs_tol / n_pieces, rel_tol=rel_tol, initial_panels=panels)
        total += v
        err += e
    if w.switching == "adiabatic":
        total += _tail_terms(pf, omega, s, w)
    return (total, err) if full_output else total


def amplitude_pair(pf: PhaseFunction, omega: float, w: Window) -> AmplitudePair:
    """Both amplitudes through the closed-form path."""
    return AmplitudePair(
        i_minus=amplitude_analytic(pf, omega, "-", w),
        i_plus=amplitude_analytic(pf, omega, "+", w),
        omega=omega,
        k=pf.mode_k,
        window=w,
    )


def window_stability(pf: PhaseFunction, omega: float, w: Window, factor: float = 2.0) -> float:
    """Relative change of |I-|^2/|I+|^2 when the inertial tails grow by ``factor``."""
    def ratio(win):
        ap = amplitude_pair(pf, omega, win)
        return ap.abs2_minus / ap.abs2_plus
    r0 = ratio(w)
    r1 = ratio(extend_tails(w, pf, factor))
    return abs(r1 - r0) / r0


def eternal_unruh_amplitude(omega: float, a: float) -> complex:
    """Closed-form Unruh amplitude for eternal uniform acceleration.

    (-i / (4 a pi sqrt(pi))) exp(-i/a) exp(i (Omega/a) ln(-i/a)) Gamma(-i Omega/a),
    with the principal logarithm ln(-i/a) = ln(1/a) - i pi/2.
    """
    if not a > 0:
        raise SpecError(f"acceleration must be positive, got {a}")
    x = omega / a
    log_term = complex(math.log(1.0 / a), -0.5 * math.pi)
    pref = -1j / (4.0 * a * math.pi * math.sqrt(math.pi))
    return pref * cmath.exp(-1j / a + 1j * x * log_term) * complex_gamma(-1j * x)


def hyperbolic_amplitude_numeric(
    omega: float,
    a: float,
    sign: Sign = "+",
    k: float = 1.0,
    *,
    lower_rate: float = 1e3,
    upper_decay: float = 30.0,
    full_output: bool = False,
):
    """I+- along eternal acceleration by long-window quadrature.

    The phase pi = -k exp(-a tau)/a is integrated numerically on
    [tau_lo, tau_hi], where k exp(-a tau_lo) = lower_rate and
    a tau_hi = upper_decay. Both outer pieces are added from the two-term
    integration-by-parts expansion, which is the eps -> 0+ limit at the
    upper end and an asymptotic tail at the fast-oscillating lower end.
    """
    if omega == 0:
        raise DegenerateError("the upper tail is resonant at Omega = 0")
    s = _sign(sign)
    tau_lo = -math.log(lower_rate / k) / a
    tau_hi = upper_decay / a

    def phi(t):
        return omega * t - s * k * np.exp(-a * t) / a

    def d1(t):
        return omega + s * k * math.exp(-a * t)

    def d2(t):
        return -s * a * k * math.exp(-a * t)

    def f(t):
        return np.exp(1j * phi(t))

    rate = abs(omega) + k * math.exp(-a * tau_lo)
    panels = int(rate * (tau_hi - tau_lo) / math.pi) + 1
    val, err = adaptive_quad(f, tau_lo, tau_hi, abs_tol=1e-13, rel_tol=1e-10, initial_panels=panels)
    for t, side in ((tau_lo, 1.0), (tau_hi, -1.0)):
        e = cmath.exp(1j * float(phi(np.float64(t))))
        val += side * (e / (1j * d1(t)) - e * d2(t) / d1(t) ** 3)
    return (val, err) if full_output else val


def unruh_transition_probability(omega: float, a: float) -> float:
    """2 pi / (Omega a (exp(Omega/T_U) - 1)) with T_U = a / 2 pi."""
    if not (omega > 0 and a > 0):
        raise SpecError("unruh_transition_probability needs Omega > 0 and a > 0")
    return 2.0 * math.pi / (omega * a * math.expm1(2.0 * math.pi * omega / a))
