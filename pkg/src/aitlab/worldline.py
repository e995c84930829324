"""Detector worldlines and the phase function pi(tau) = k^mu x_mu(tau).

Two motions are supported:

* :class:`Eternal` -- uniform proper acceleration for all proper time,
  t = sinh(a tau)/a, z = cosh(a tau)/a, and pi(tau) = k (t - z).
* :class:`PhaseSlope` -- motion described directly by the phase rate
  d pi/d tau = k v(tau) with v piecewise linear: constant v0 before 0, a linear
  ramp to v1 on [0, T1), a second ramp to v2 on [T1, T2), constant v2 after.
  The phase origin is pi(0) = 0.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import SpecError
from .specfun import QuadPhase

log = logging.getLogger(__name__)

__all__ = [
    "Eternal",
    "PhaseSlope",
    "WorldlineSpec",
    "Segment",
    "PhaseFunction",
    "build_phase_function",
    "eval_phase",
    "eval_phase_rate",
    "uniform_trajectory",
]


@dataclass(frozen=True)
class Eternal:
    a: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0):
            raise SpecError(f"Eternal.a must be a finite positive acceleration, got {self.a}")


@dataclass(frozen=True)
class PhaseSlope:
    """Piecewise-linear phase-rate profile. ``v2=None`` means v2 = v0."""

    v0: float
    v1: float
    T1: float
    T2: float
    v2: Optional[float] = None

    def __post_init__(self):
        if self.v2 is None:
            log.info("PhaseSlope.v2 not given; defaulting to v0 = %r", self.v0)
            object.__setattr__(self, "v2", self.v0)
        for name in ("v0", "v1", "v2", "T1", "T2"):
            if not math.isfinite(getattr(self, name)):
                raise SpecError(f"PhaseSlope.{name} must be finite")
        if not self.T1 > 0:
            raise SpecError(f"PhaseSlope.T1 must be > 0, got {self.T1}")
        if not self.T2 > self.T1:
            raise SpecError(f"PhaseSlope.T2 must exceed T1, got T1={self.T1}, T2={self.T2}")
        if not (math.isfinite(self.a1) and math.isfinite(self.a2)):
            raise SpecError("derived accelerations are not finite")

    @property
    def a1(self) -> float:
        return (self.v1 - self.v0) / self.T1

    @property
    def a2(self) -> float:
        return (self.v2 - self.v1) / (self.T2 - self.T1)


WorldlineSpec = Union[Eternal, PhaseSlope]


@dataclass(frozen=True)
class Segment:
    """One piece of pi(tau) on [start, end), written about a local origin.

    pi(tau) = phase(tau - origin). ``start``/``end`` may be -inf/+inf.
    """

    start: float
    end: float
    origin: float
    phase: QuadPhase

    def value(self, tau: float) -> float:
        return self.phase(tau - self.origin)

    def rate(self, tau: float) -> float:
        return self.phase.slope(tau - self.origin)

    @property
    def is_linear(self) -> bool:
        return self.phase.q2 == 0.0


@dataclass(frozen=True)
class PhaseFunction:
    mode_k: float
    segments: tuple[Segment, ...] = ()
    eternal_a: Optional[float] = None
    spec: Optional[WorldlineSpec] = field(default=None, compare=False)

    @property
    def is_eternal(self) -> bool:
        return self.eternal_a is not None

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(s.start for s in self.segments[1:])

    def segment_at(self, tau: float) -> Segment:
        for seg in self.segments:
            if tau < seg.end:
                return seg
        return self.segments[-1]

    def shifted(self, offset: float) -> "PhaseFunction":
        """Same motion with a constant added to the phase."""
        if self.is_eternal:
            raise SpecError("global phase shifts are only defined for piecewise phases")
        segs = tuple(
            Segment(s.start, s.end, s.origin, QuadPhase(s.phase.q0 + offset, s.phase.q1, s.phase.q2))
            for s in self.segments
        )
        return PhaseFunction(self.mode_k, segs, None, self.spec)


def build_phase_function(spec: WorldlineSpec, k: float = 1.0) -> PhaseFunction:
    """Piecewise-quadratic phase function of ``spec`` for field mode ``k``.

    For :class:`Eternal` the result carries no segments, only the marker
    ``eternal_a``; its hyperbolic phase goes through the closed form or the
    dedicated quadrature in :mod:`aitlab.amplitudes`.
    """
    if not (math.isfinite(k) and k > 0):
        raise SpecError(f"mode wavenumber k must be positive, got {k}")
    if isinstance(spec, Eternal):
        return PhaseFunction(mode_k=k, eternal_a=spec.a, spec=spec)
    if not isinstance(spec, PhaseSlope):
        raise SpecError(f"unknown worldline spec {spec!r}")
    v0, v1, v2, T1, T2 = spec.v0, spec.v1, spec.v2, spec.T1, spec.T2
    a1, a2 = spec.a1, spec.a2
    pi_t1 = k * (v0 * T1 + 0.5 * a1 * T1 * T1)
    pi_t2 = pi_t1 + k * (v1 * (T2 - T1) + 0.5 * a2 * (T2 - T1) ** 2)
    segs = (
        Segment(-math.inf, 0.0, 0.0, QuadPhase(0.0, k * v0, 0.0)),
        Segment(0.0, T1, 0.0, QuadPhase(0.0, k * v0, 0.5 * k * a1)),
        Segment(T1, T2, T1, QuadPhase(pi_t1, k * v1, 0.5 * k * a2)),
        Segment(T2, math.inf, T2, QuadPhase(pi_t2, k * v2, 0.0)),
    )
    return PhaseFunction(mode_k=k, segments=segs, spec=spec)


def eval_phase(pf: PhaseFunction, tau: float) -> float:
    """pi(tau). For eternal acceleration this is k (t - z) = -k exp(-a tau)/a."""
    if pf.is_eternal:
        a = pf.eternal_a
        return -pf.mode_k * math.exp(-a * tau) / a
    return pf.segment_at(tau).value(tau)


def eval_phase_rate(pf: PhaseFunction, tau: float) -> float:
    """d pi / d tau."""
    if pf.is_eternal:
        return pf.mode_k * math.exp(-pf.eternal_a * tau)
    return pf.segment_at(tau).rate(tau)


def uniform_trajectory(a: float, tau: float) -> tuple[float, float]:
    """(t, z) on the uniformly accelerated worldline at proper time ``tau``."""
    if not a > 0:
        raise SpecError(f"acceleration must be positive, got {a}")
    return math.sinh(a * tau) / a, math.cosh(a * tau) / a
