"""Show that a sharp proper-time cut turns the dip into an edge artifact.

For each switching mode: the gap found in the fig1 bracket, its ratio, and
the relative ratio change when both inertial tails are doubled.
"""
from aitlab.amplitudes import default_window, window_stability
from aitlab.errors import NoDipError
from aitlab.fieldstate import Thermal, find_ait_gap
from aitlab.worldline import PhaseSlope, build_phase_function


def main():
    for v2 in (None, 0.4575):
        spec = PhaseSlope(1.041, 1.070, 9.74350, 1305.413, v2=v2)
        pf = build_phase_function(spec)
        for switching, ramp in (("sharp", 0.0), ("cosine", 50.0), ("adiabatic", 0.0)):
            w = default_window(spec, switching=switching, ramp_width=ramp)
            try:
                r = find_ait_gap(pf, Thermal(0.1), (0.004, 0.015), 400, w)
            except NoDipError as exc:
                print(f"v2={spec.v2:<7g} {switching:9s} no dip ({exc})")
                continue
            drift = window_stability(pf, r.gap, w)
            print(f"v2={spec.v2:<7g} {switching:9s} gap={r.gap:.6g} ratio={r.ratio_at_gap:.3e} drift(2x tails)={drift:.3g}")


if __name__ == "__main__":
    main()
