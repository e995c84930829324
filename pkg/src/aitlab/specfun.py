"""Special-function kernel: complex gamma, Faddeeva/erf, quadratic-phase integrals.

Everything here is a pure function of its arguments on plain Python ``complex``
values. Accuracy targets (checked against mpmath in the test suite):

* ``complex_gamma``: 12 significant digits on Re z in [-50, 50], |Im z| <= 100.
* ``faddeeva`` / ``erf_complex``: 10 significant digits for |z| <= 1e4.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, PoleError

__all__ = [
    "QuadPhase",
    "complex_gamma",
    "faddeeva",
    "erf_complex",
    "quad_phase_integral",
]

_SQRT_PI = math.sqrt(math.pi)
_SQRT_2PI = math.sqrt(2.0 * math.pi)

# Lanczos g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

POLE_TOL = 1e-12
GAMMA_RE_MAX = 50.0
GAMMA_IM_MAX = 100.0
ERF_ENVELOPE = 1e4


def _gamma_right(z: complex) -> complex:
    # valid for Re z >= 0.5
    z = z - 1.0
    x = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        x += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_2PI * cmath.exp((z + 0.5) * cmath.log(t) - t) * x


def complex_gamma(z: complex) -> complex:
    """Gamma function of a complex argument.

    Lanczos approximation on Re z >= 0.5, reflection formula below that.

    Raises
    ------
    PoleError
        If ``z`` is within 1e-12 of a non-positive integer.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise AccuracyError(f"non-finite argument {z!r}")
    if z.real <= 0.5:
        nearest = round(z.real)
        if nearest <= 0 and abs(z - nearest) < POLE_TOL:
            raise PoleError(f"gamma pole at {nearest}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * _gamma_right(1.0 - z))
    return _gamma_right(z)


def _weideman_coefficients(n: int) -> tuple[float, tuple[float, ...]]:
    m = 2 * n
    k = np.arange(-m + 1, m)
    ell = math.sqrt(n / math.sqrt(2.0))
    t = ell * np.tan(k * math.pi / (2 * m))
    f = np.concatenate([[0.0], np.exp(-t * t) * (ell * ell + t * t)])
    a = np.real(np.fft.fft(np.fft.fftshift(f))) / (2 * m)
    return ell, tuple(float(c) for c in a[n:0:-1])


# Rational approximation of w(z) in the upper half plane (Weideman 1994, N = 40).
_W_L, _W_COEF = _weideman_coefficients(40)
_CF_RADIUS = 8.0
_CF_DEPTH = 24


def faddeeva(z: complex) -> complex:
    """Faddeeva function w(z) = exp(-z^2) erfc(-iz) for Im z >= 0.

    Uses the Laplace continued fraction for |z| >= 8 and Weideman's rational
    approximation inside that disc.
    """
    z = complex(z)
    if z.imag < 0.0:
        raise AccuracyError("faddeeva is only evaluated in the closed upper half plane")
    if abs(z) >= _CF_RADIUS:
        acc = 0j
        for k in range(_CF_DEPTH, 0, -1):
            acc = (0.5 * k) / (z - acc)
        return (1j / _SQRT_PI) / (z - acc)
    d = _W_L - 1j * z
    big_z = (_W_L + 1j * z) / d
    p = 0j
    for c in _W_COEF:
        p = p * big_z + c
    return 2.0 * p / (d * d) + (1.0 / _SQRT_PI) / d


def _erf_series(z: complex) -> complex:
    z2 = z * z
    term = z
    total = z
    n = 0
    while True:
        n += 1
        term *= -z2 / n
        contrib = term / (2 * n + 1)
        total += contrib
        if abs(contrib) <= 1e-17 * abs(total):
            break
    return 2.0 / _SQRT_PI * total


def erf_complex(z: complex) -> complex:
    """Error function of a complex argument, valid for |z| <= 1e4.

    Taylor series near the origin, otherwise ``1 - exp(-z^2) w(iz)`` on the
    right half plane mirrored by oddness.

    Raises
    ------
    AccuracyError
        If |z| > 1e4 or the result is not representable in double precision.
    """
    z = complex(z)
    if abs(z) > ERF_ENVELOPE:
        raise AccuracyError(f"|z| = {abs(z):.3g} outside envelope {ERF_ENVELOPE:g}")
    if abs(z) < 2.0:
        return _erf_series(z)
    sign = 1.0 if z.real >= 0.0 else -1.0
    zz = sign * z
    expo = -(zz * zz)
    if expo.real > 700.0:
        raise AccuracyError(f"erf({z}) overflows double precision")
    return sign * (1.0 - cmath.exp(expo) * faddeeva(1j * zz))


@dataclass(frozen=True)
class QuadPhase:
    """Quadratic phase q0 + q1*t + q2*t**2 (radians)."""

    q0: float
    q1: float
    q2: float

    def __post_init__(self):
        for name in ("q0", "q1", "q2"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"QuadPhase.{name} must be finite")

    def __call__(self, t: float) -> float:
        return self.q0 + t * (self.q1 + t * self.q2)

    def slope(self, t: float) -> float:
        return self.q1 + 2.0 * self.q2 * t


# |q2| * (b - a)**2 below this uses the near-linear expansion.
CURVATURE_THRESHOLD = 1e-8
_SERIES_CUT = 0.5


def _moments(c: float, h: float) -> tuple[complex, complex]:
    """Return (int u^0, int u^2) of exp(i c u) over [-h, h]."""
    x = c * h
    if abs(x) < _SERIES_CUT:
        x2 = x * x
        m0 = m2 = 0.0
        term = 1.0
        for n in range(12):
            if n:
                term *= -x2 / ((2 * n - 1) * (2 * n))
            m0 += term / (2 * n + 1)
            m2 += term / (2 * n + 3)
        return 2.0 * h * m0, 2.0 * h**3 * m2
    s, co = math.sin(x), math.cos(x)
    m0 = 2.0 * s / c
    m2 = 2.0 * (h * h * s / c + 2.0 * h * co / (c * c) - 2.0 * s / c**3)
    return m0, m2


def quad_phase_integral(p: QuadPhase, ta: float, tb: float) -> complex:
    """Exact value of the integral of exp(i(q0 + q1 t + q2 t^2)) over [ta, tb].

    Reversed limits negate the result. For negligible curvature the phase is
    expanded about the midpoint and the q2 term kept to first order; otherwise
    the integral is written through the Faddeeva function so that no large
    constants cancel.
    """
    if not (math.isfinite(ta) and math.isfinite(tb)):
        raise ValueError("integration limits must be finite")
    if tb < ta:
        return -quad_phase_integral(p, tb, ta)
    if tb == ta:
        return 0j
    q0, q1, q2 = p.q0, p.q1, p.q2
    if abs(q2) * (tb - ta) ** 2 < CURVATURE_THRESHOLD:
        mid = 0.5 * (ta + tb)
        h = 0.5 * (tb - ta)
        c = q1 + 2.0 * q2 * mid
        m0, m2 = _moments(c, h)
        return cmath.exp(1j * p(mid)) * (m0 + 1j * q2 * m2)
    shift = q1 / (2.0 * q2)
    root = cmath.sqrt(-1j * q2)
    phase_vertex = q0 - q2 * shift * shift
    za = root * (ta + shift)
    zb = root * (tb + shift)
    sa = 1.0 if za.real >= 0.0 else -1.0
    sb = 1.0 if zb.real >= 0.0 else -1.0
    total = -sb * cmath.exp(1j * p(tb)) * faddeeva(1j * sb * zb)
    total += sa * cmath.exp(1j * p(ta)) * faddeeva(1j * sa * za)
    if sa != sb:
        total += (sb - sa) * cmath.exp(1j * phase_vertex)
    return _SQRT_PI / (2.0 * root) * total
