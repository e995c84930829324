"""Two-detector X-state after first-order evolution, and its concurrence.

Basis order is |gg>, |ge>, |eg>, |ee>. The initial state is
c_ge |g>|e> + c_eg |e>|g>. Each transition amplitude carries one factor of its
detector's coupling, so the second-order populations pick up lambda^2 and the
four-amplitude corrections inside the middle block pick up lambda_A^2 lambda_B^2.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .amplitudes import AmplitudePair
from .errors import PositivityError, ShapeError, SpecError

__all__ = [
    "InitialAmplitudes",
    "DetectorChannel",
    "XState",
    "PerturbativeWarning",
    "evolve_xstate",
    "concurrence_xstate",
    "concurrence_wootters",
]

EPS_POS = 1e-12
CLIP_TOL = 1e-9
PERTURBATIVE_LIMIT = 0.1


class PerturbativeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class InitialAmplitudes:
    c_ge: complex
    c_eg: complex

    def __post_init__(self):
        norm = abs(self.c_ge) ** 2 + abs(self.c_eg) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise SpecError(f"initial amplitudes violate normalization: |c_ge|^2 + |c_eg|^2 = {norm!r}")

    @classmethod
    def bell(cls) -> "InitialAmplitudes":
        r = math.sqrt(0.5)
        return cls(complex(r), complex(r))


@dataclass(frozen=True)
class DetectorChannel:
    ap: AmplitudePair
    mean_n: float
    coupling: float

    def __post_init__(self):
        if self.mean_n < 0 or self.coupling < 0:
            raise SpecError("mean occupation and coupling must be non-negative")

    @property
    def strength(self) -> float:
        """lambda^2 (<n>+1) max(|I-|^2, |I+|^2); small for the expansion to hold."""
        return self.coupling**2 * (self.mean_n + 1) * max(self.ap.abs2_minus, self.ap.abs2_plus)


@dataclass(frozen=True)
class XState:
    d11: float
    d22: float
    d33: float
    d44: float
    x41: complex  # <ee|rho|gg> entry as laid out in the X matrix, rho_eegg
    x32: complex  # rho_egge
    trace_norm: float = 1.0

    def matrix(self) -> np.ndarray:
        m = np.zeros((4, 4), dtype=complex)
        m[0, 0], m[1, 1], m[2, 2], m[3, 3] = self.d11, self.d22, self.d33, self.d44
        m[0, 3], m[3, 0] = self.x41, np.conj(self.x41)
        m[1, 2], m[2, 1] = self.x32, np.conj(self.x32)
        return m

    @property
    def trace(self) -> float:
        return self.d11 + self.d22 + self.d33 + self.d44

    def is_physical(self, eps: float = EPS_POS) -> bool:
        return (
            min(self.d11, self.d22, self.d33, self.d44) >= -eps
            and abs(self.x41) ** 2 <= self.d11 * self.d44 + eps
            and abs(self.x32) ** 2 <= self.d22 * self.d33 + eps
        )


def evolve_xstate(
    init: InitialAmplitudes, A: DetectorChannel, B: DetectorChannel, *, check_perturbative: bool = True
) -> XState:
    """Evolved, trace-normalized two-detector X-state.

    With ``check_perturbative`` a :class:`PerturbativeWarning` is issued when
    either channel's strength exceeds 0.1. Sweeps turn this off and report
    the largest strength once.

    Raises
    ------
    PositivityError
        If a normalized population is below -1e-9.
    """
    for name, ch in (("A", A), ("B", B)):
        if check_perturbative and ch.strength > PERTURBATIVE_LIMIT:
            warnings.warn(
                f"detector {name}: lambda^2 (<n>+1) |I|^2 = {ch.strength:.3g} exceeds {PERTURBATIVE_LIMIT}",
                PerturbativeWarning,
                stacklevel=2,
            )
    al, be = init.c_ge, init.c_eg
    al2, be2 = abs(al) ** 2, abs(be) ** 2
    mA, pA, nA, lA2 = A.ap.i_minus, A.ap.i_plus, A.mean_n, A.coupling**2
    mB, pB, nB, lB2 = B.ap.i_minus, B.ap.i_plus, B.mean_n, B.coupling**2
    mA2, pA2, mB2, pB2 = abs(mA) ** 2, abs(pA) ** 2, abs(mB) ** 2, abs(pB) ** 2
    lAB = lA2 * lB2

    d11 = al2 * lB2 * (nB * pB2 + (nB + 1) * mB2) + be2 * lA2 * (nA * pA2 + (nA + 1) * mA2)
    x41 = (2 * nB + 1) * al.conjugate() * be * mB * pB * lB2 + be.conjugate() * al * (2 * nA + 1) * pA * mA * lA2
    d22 = al2 + be2 * lAB * (
        pA2 * nA * (nB + 1) * pB2
        + mA2 * nA * nB * pB2
        + mA2 * (nA + 1) * (nB + 1) * pB2
        + mA2 * nB * (nA + 1) * mB2
    )
    c = np.conj
    x32 = al.conjugate() * be + be.conjugate() * al * lAB * (
        nA * (nB + 1) * pA * c(pB) * mA * c(mB)
        + nA * nB * pA * c(mB) * mA * c(pB)
        + (nA + 1) * (nB + 1) * mA * c(pB) * pA * c(mB)
        + (nA + 1) * nB * mA * c(mB) * pA * c(pB)
    )
    d33 = be2 + al2 * lAB * (
        mA2 * nA * (nB + 1) * mB2
        + mA2 * nA * nB * pB2
        + pA2 * (nA + 1) * (nB + 1) * mB2
        + pA2 * (nA + 1) * nB * pB2
    )
    d44 = be2 * lB2 * (nB * mB2 + (nB + 1) * pB2) + al2 * lA2 * (nA * mA2 + (nA + 1) * pA2)

    tr = d11 + d22 + d33 + d44
    diag = []
    for name, d in (("d11", d11), ("d22", d22), ("d33", d33), ("d44", d44)):
        d = d / tr
        if d < -CLIP_TOL:
            raise PositivityError(f"{name} = {d:.3g} after normalization; perturbation theory broke down")
        diag.append(max(d, 0.0))
    return XState(*diag, x41=complex(x41) / tr, x32=complex(x32) / tr, trace_norm=tr)


def concurrence_xstate(rho: XState) -> float:
    """2 max(0, |rho_23| - sqrt(rho_11 rho_44), |rho_41| - sqrt(rho_22 rho_33))."""
    c1 = abs(rho.x32) - math.sqrt(rho.d11 * rho.d44)
    c2 = abs(rho.x41) - math.sqrt(rho.d22 * rho.d33)
    return min(1.0, 2.0 * max(0.0, c1, c2))


_YY = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex)


def concurrence_wootters(rho: np.ndarray) -> float:
    """Wootters concurrence of a general two-qubit density matrix.

    The square roots of the eigenvalues of rho (Y x Y) rho* (Y x Y) are taken
    as singular values of sqrt(rho) (Y x Y) sqrt(rho)*, which avoids square
    roots of round-off.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ShapeError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-9:
        raise ShapeError("density matrix is not Hermitian")
    evals, evecs = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    if evals.min() < -1e-9:
        raise ShapeError(f"density matrix has eigenvalue {evals.min():.3g} < 0")
    root = (evecs * np.sqrt(np.clip(evals, 0.0, None))) @ evecs.conj().T
    sv = np.linalg.svd(root @ _YY @ root.conj(), compute_uv=False)
    return max(0.0, sv[0] - sv[1] - sv[2] - sv[3])
