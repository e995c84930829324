"""Scan the final phase rate v2 and report where the transparency dip lands.

Used to pick v2 for configs/fig1.toml. For each v2 the gap is searched in the
fig1 bracket and reported with its depth and window drift.

    python scripts/scan_v2.py [--lo 0.40 --hi 0.52 --step 0.0025]
"""
import argparse

import numpy as np

from aitlab.amplitudes import default_window, window_stability
from aitlab.errors import NoDipError
from aitlab.fieldstate import Thermal, find_ait_gap
from aitlab.worldline import PhaseSlope, build_phase_function

TARGET = 0.00762


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--lo", type=float, default=0.40)
    ap.add_argument("--hi", type=float, default=0.52)
    ap.add_argument("--step", type=float, default=0.0025)
    ap.add_argument("--switching", default="adiabatic")
    args = ap.parse_args()
    print("v2,gap,rel_offset,ratio_at_gap,window_drift")
    for v2 in np.arange(args.lo, args.hi + 0.5 * args.step, args.step):
        spec = PhaseSlope(1.041, 1.070, 9.74350, 1305.413, v2=float(v2))
        pf = build_phase_function(spec)
        w = default_window(spec, switching=args.switching)
        try:
            r = find_ait_gap(pf, Thermal(0.1), (0.004, 0.015), 400, w)
        except NoDipError:
            print(f"{v2:.4f},,,,")
            continue
        drift = window_stability(pf, r.gap, w)
        print(f"{v2:.4f},{r.gap:.6g},{r.gap / TARGET - 1:+.4f},{r.ratio_at_gap:.3e},{drift:.2e}")


if __name__ == "__main__":
    main()
