"""Unruh-DeWitt detectors on piecewise-accelerated worldlines in thermal fields.

Transition amplitudes in closed form, the acceleration-induced transparency
ratio, two-detector entanglement, and a sweep CLI (``ait-lab``).
"""
__version__ = "0.1.0"

from .amplitudes import (  # noqa: E402
    AmplitudePair,
    Window,
    amplitude_analytic,
    amplitude_numeric,
    amplitude_pair,
    default_window,
    eternal_unruh_amplitude,
    window_stability,
)
from .entanglement import (  # noqa: E402
    DetectorChannel,
    InitialAmplitudes,
    XState,
    concurrence_wootters,
    concurrence_xstate,
    evolve_xstate,
)
from .fieldstate import Fock, Thermal, Vacuum, ait_ratio, find_ait_gap, mean_occupation, transition_probability  # noqa: E402
from .worldline import Eternal, PhaseSlope, build_phase_function  # noqa: E402

__all__ = [
    "__version__",
    "AmplitudePair", "Window", "amplitude_analytic", "amplitude_numeric", "amplitude_pair",
    "default_window", "eternal_unruh_amplitude", "window_stability",
    "DetectorChannel", "InitialAmplitudes", "XState", "concurrence_wootters", "concurrence_xstate", "evolve_xstate",
    "Fock", "Thermal", "Vacuum", "ait_ratio", "find_ait_gap", "mean_occupation", "transition_probability",
    "Eternal", "PhaseSlope", "build_phase_function",
]
