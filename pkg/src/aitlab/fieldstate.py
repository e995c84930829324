"""Field states, thermal transition probability and the AIT gap finder."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from .amplitudes import AmplitudePair, Window, amplitude_pair
from .errors import DegenerateError, NoDipError, SpecError
from .worldline import PhaseFunction

__all__ = [
    "Vacuum",
    "Fock",
    "Thermal",
    "FieldState",
    "TransitionProbability",
    "AitScanResult",
    "mean_occupation",
    "transition_probability",
    "ait_ratio",
    "golden_section_min",
    "find_ait_gap",
]

_UNDERFLOW_FLOOR = 1e-300


@dataclass(frozen=True)
class Vacuum:
    pass


@dataclass(frozen=True)
class Fock:
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise SpecError(f"Fock occupation must be a non-negative integer, got {self.n}")


@dataclass(frozen=True)
class Thermal:
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise SpecError(f"Thermal.beta must be positive, got {self.beta}")

    @property
    def temperature(self) -> float:
        return 1.0 / self.beta


FieldState = Union[Vacuum, Fock, Thermal]


def mean_occupation(s: FieldState, omega: float) -> float:
    """<n> of the mode with frequency ``omega``: 0, n, or 1/(exp(beta omega) - 1)."""
    if not omega > 0:
        raise SpecError(f"mode frequency must be positive, got {omega}")
    if isinstance(s, Vacuum):
        return 0.0
    if isinstance(s, Fock):
        return float(s.n)
    if isinstance(s, Thermal):
        x = s.beta * omega
        if x > 700.0:  # expm1 overflows; 1/(e^x - 1) = e^-x to double precision here
            return math.exp(-x)
        return 1.0 / math.expm1(x)
    raise SpecError(f"unknown field state {s!r}")


class TransitionProbability(NamedTuple):
    abs_term: float
    unruh_term: float
    total: float


def transition_probability(ap: AmplitudePair, s: FieldState, omega: float, coupling: float) -> TransitionProbability:
    """Excitation probability split into stimulated-absorption and Unruh parts.

    abs = lambda^2 <n> |I-|^2, unruh = lambda^2 (<n> + 1) |I+|^2. For a Fock
    state the integer occupation enters directly.
    """
    if coupling < 0:
        raise SpecError("coupling must be non-negative")
    n = s.n if isinstance(s, Fock) else mean_occupation(s, omega)
    lam2 = coupling * coupling
    a = lam2 * n * ap.abs2_minus
    u = lam2 * (n + 1) * ap.abs2_plus
    return TransitionProbability(a, u, a + u)


def ait_ratio(ap: AmplitudePair, s: FieldState, omega: float) -> float:
    """Absorption-to-Unruh ratio <n>/(<n>+1) * |I-|^2/|I+|^2.

    For a thermal state the prefactor is written as exp(-beta omega).
    """
    if ap.abs2_plus < _UNDERFLOW_FLOOR:
        raise DegenerateError("|I+|^2 underflows; the ratio is undefined")
    amp = ap.abs2_minus / ap.abs2_plus
    if isinstance(s, Thermal):
        return math.exp(-s.beta * omega) * amp
    n = mean_occupation(s, omega)
    return n / (n + 1.0) * amp


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_min(f, lo: float, hi: float, tol: float, max_iter: int = 200):
    """Minimize a unimodal ``f`` on [lo, hi]; returns (x, f(x)) of the best point seen."""
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    best = (x1, f1) if f1 <= f2 else (x2, f2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = f(x1)
            if f1 < best[1]:
                best = (x1, f1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = f(x2)
            if f2 < best[1]:
                best = (x2, f2)
    return best


@dataclass(frozen=True)
class AitScanResult:
    gap: float
    ratio_at_gap: float
    amplitude_ratio_at_gap: float
    scan_table: tuple  # rows of (omega, |I-|^2, |I+|^2, ratio)


def find_ait_gap(
    pf: PhaseFunction,
    s: FieldState,
    omega_range: tuple[float, float],
    grid_n: int,
    w: Window,
    *,
    log_spaced: bool = True,
    rel_tol: float = 1e-5,
    workers: Optional[int] = None,
) -> AitScanResult:
    """Locate the energy gap where stimulated absorption is most suppressed.

    Grid scan of |I-|^2/|I+|^2, then golden-section refinement of its
    logarithm in log(Omega) around the best grid point. With the mode
    frequency fixed the state prefactor is constant, so the location does not
    depend on ``s``; ``s`` only weights the reported ratios.

    Raises
    ------
    NoDipError
        If the worldline has no accelerated segment or the grid minimum sits on
        a range boundary.
    """
    lo, hi = omega_range
    if not 0 < lo < hi:
        raise SpecError(f"need 0 < lo < hi, got {omega_range}")
    if grid_n < 16:
        raise SpecError("grid_n must be at least 16")
    if pf.is_eternal or all(seg.is_linear for seg in pf.segments):
        raise NoDipError("worldline has no accelerated segment, so there is no transparency structure")
    omega_k = pf.mode_k
    grid = np.geomspace(lo, hi, grid_n) if log_spaced else np.linspace(lo, hi, grid_n)

    def point(om):
        ap = amplitude_pair(pf, float(om), w)
        return ap.abs2_minus, ap.abs2_plus

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            pairs = list(ex.map(point, grid))
    else:
        pairs = [point(om) for om in grid]

    table = []
    amp_ratios = []
    for om, (m2, p2) in zip(grid, pairs):
        ap = AmplitudePair(complex(math.sqrt(m2)), complex(math.sqrt(p2)), float(om), omega_k, w)
        table.append((float(om), m2, p2, ait_ratio(ap, s, omega_k)))
        amp_ratios.append(m2 / p2)
    j = int(np.argmin(amp_ratios))
    if j == 0 or j == grid_n - 1:
        raise NoDipError(f"ratio minimum at the range boundary Omega = {grid[j]:.6g}")

    def objective(log_om):
        m2, p2 = point(math.exp(log_om))
        return math.log(m2 / p2) if m2 > 0 else -math.inf

    a, b = math.log(grid[j - 1]), math.log(grid[j + 1])
    x, fx = golden_section_min(objective, a, b, tol=rel_tol)
    if fx < math.log(amp_ratios[j]):
        gap = math.exp(x)
    else:
        gap = float(grid[j])
    ap = amplitude_pair(pf, gap, w)
    return AitScanResult(
        gap=gap,
        ratio_at_gap=ait_ratio(ap, s, omega_k),
        amplitude_ratio_at_gap=ap.abs2_minus / ap.abs2_plus,
        scan_table=tuple(table),
    )
