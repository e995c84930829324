"""ait-lab command line.

Exit codes: 0 ok, 2 configuration error, 3 numerical/convergence error
(a ``.partial`` CSV is left for aborted sweeps), 4 I/O error.
"""
from __future__ import annotations

import argparse
import logging
import math
import os
import statistics
import sys
from dataclasses import replace

from . import __version__
from .amplitudes import (
    eternal_unruh_amplitude,
    hyperbolic_amplitude_numeric,
    unruh_transition_probability,
    window_stability,
)
from .errors import AitLabError, ConfigError, SpecError
from .fieldstate import find_ait_gap
from .sweep import (
    GapSweep,
    SweepAborted,
    TempSweep,
    emit_outputs,
    is_non_increasing,
    load_config,
    render_csv,
    resolve_threads,
    run_gap_sweep,
    run_temperature_sweep,
    with_outputs,
)
from .worldline import build_phase_function

log = logging.getLogger("aitlab")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4
OFF_DIP_FACTOR = 3.0
VANISH_LEVEL = 1e-3


def _emit(summary: dict) -> None:
    for key, value in summary.items():
        if isinstance(value, float):
            value = f"{value:.10g}"
        print(f"{key}={value}")


def _load(args):
    cfg = load_config(args.config)
    if args.precision is not None and not 6 <= args.precision <= 17:
        raise ConfigError("--precision", f"must lie in [6, 17], got {args.precision}")
    return with_outputs(cfg, args.out, args.svg, args.precision)


def _write(rows, cfg, args) -> None:
    if cfg.outputs.csv_path is None:
        sys.stdout.write(render_csv(rows, cfg))
        return
    for path in emit_outputs(rows, cfg):
        log.info("wrote %s", path)


def _sweep(runner, cfg, args):
    try:
        return runner(cfg, resolve_threads(args.threads))
    except SweepAborted as exc:
        if cfg.outputs.csv_path is None:
            stem = os.path.splitext(os.path.basename(args.config))[0]
            cfg = with_outputs(cfg, csv_path=stem + ".csv")
        paths = emit_outputs(exc.rows, cfg, partial=True)
        log.error("%s; %d finished rows kept in %s", exc, len(exc.rows), paths[0])
        raise


def _gap_of(cfg, threads):
    pf = build_phase_function(cfg.worldline, cfg.mode_k)
    return find_ait_gap(pf, cfg.field, cfg.sweep.search_range, cfg.sweep.n, cfg.window, workers=threads)


def cmd_ait_scan(args) -> int:
    cfg = _load(args)
    if not isinstance(cfg.sweep, GapSweep):
        raise ConfigError("sweep.kind", "ait-scan needs kind = 'gap'")
    rows = _sweep(run_gap_sweep, cfg, args)
    _write(rows, cfg, args)
    best = min(rows, key=lambda r: r.ratio)
    _emit({"rows": len(rows), "min_ratio_omega": best.sweep_value, "min_ratio": best.ratio})
    return EXIT_OK


def cmd_entangle_scan(args) -> int:
    cfg = _load(args)
    if not isinstance(cfg.sweep, GapSweep):
        raise ConfigError("sweep.kind", "entangle-scan needs kind = 'gap'")
    rows = _sweep(run_gap_sweep, cfg, args)
    _write(rows, cfg, args)
    gap = _gap_of(cfg, resolve_threads(args.threads)).gap
    near = min(rows, key=lambda r: abs(math.log(r.sweep_value / gap)))
    off = [r.concurrence for r in rows if abs(math.log(r.sweep_value / gap)) >= math.log(OFF_DIP_FACTOR)]
    peak = max(rows, key=lambda r: r.concurrence)
    summary = {
        "rows": len(rows),
        "gap": gap,
        "concurrence_near_gap": near.concurrence,
        "median_off_dip_concurrence": statistics.median(off) if off else float("nan"),
        "max_concurrence": peak.concurrence,
        "max_concurrence_omega": peak.sweep_value,
    }
    _emit(summary)
    return EXIT_OK


def cmd_temp_scan(args) -> int:
    cfg = _load(args)
    if not isinstance(cfg.sweep, TempSweep):
        raise ConfigError("sweep.kind", "temp-scan needs kind = 'temperature'")
    rows = _sweep(run_temperature_sweep, cfg, args)
    _write(rows, cfg, args)
    conc = [r.concurrence for r in rows]
    vanish = next((1.0 / r.sweep_value for r in rows if r.concurrence < VANISH_LEVEL), None)
    _emit({
        "rows": len(rows),
        "omega": cfg.sweep.omega,
        "monotone_non_increasing": str(is_non_increasing(conc)).lower(),
        "concurrence_lowest_T": conc[0],
        "concurrence_highest_T": conc[-1],
        "vanishing_T": "none" if vanish is None else f"{vanish:.10g}",
    })
    return EXIT_OK


def cmd_find_gap(args) -> int:
    cfg = _load(args)
    if not isinstance(cfg.sweep, GapSweep):
        raise ConfigError("sweep.kind", "find-gap needs kind = 'gap'")
    threads = resolve_threads(args.threads)
    lines = {}
    scan = cfg.v2_scan or (cfg.worldline.v2,)
    for v2 in scan:
        c = replace(cfg, worldline=replace(cfg.worldline, v2=v2))
        res = _gap_of(c, threads)
        pf = build_phase_function(c.worldline, c.mode_k)
        drift = window_stability(pf, res.gap, c.window)
        tag = "" if len(scan) == 1 else f"[v2={v2:g}]"
        lines[f"gap{tag}"] = res.gap
        lines[f"ratio_at_gap{tag}"] = res.ratio_at_gap
        lines[f"amplitude_ratio_at_gap{tag}"] = res.amplitude_ratio_at_gap
        lines[f"window_drift{tag}"] = drift
    _emit(lines)
    return EXIT_OK


def cmd_unruh_check(args) -> int:
    a, om = args.a, args.omega
    if not (a > 0 and om > 0):
        raise ConfigError("--a/--omega", "both must be positive")
    exc = abs(eternal_unruh_amplitude(-om, a)) ** 2
    dex = abs(eternal_unruh_amplitude(om, a)) ** 2
    boltzmann = math.exp(-2 * math.pi * om / a)
    num = abs(hyperbolic_amplitude_numeric(om, a, "+")) ** 2
    _emit({
        "unruh_temperature": a / (2 * math.pi),
        "detailed_balance_ratio": exc / dex,
        "boltzmann_factor": boltzmann,
        "detailed_balance_rel_err": abs(exc / dex - boltzmann) / boltzmann,
        "planck_probability": unruh_transition_probability(om, a),
        "numeric_to_closed_form": num / (16 * math.pi**3 * exc),
    })
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ait-lab", description="Acceleration-induced transparency sweeps.")
    p.add_argument("--version", action="version", version=f"ait-lab {__version__}")
    quiet = argparse.ArgumentParser(add_help=False)
    quiet.add_argument("-q", "--quiet", action="store_true", help="only warnings and errors on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, outputs=True):
        sp.add_argument("config", help="TOML run configuration")
        sp.add_argument("--threads", type=int, default=None, help="worker threads (env AIT_LAB_THREADS)")
        if outputs:
            sp.add_argument("--out", default=None, help="CSV path (overrides output.csv)")
            sp.add_argument("--svg", default=None, help="SVG path (overrides output.svg)")
        else:
            sp.set_defaults(out=None, svg=None)
        sp.add_argument("--precision", type=int, default=None, help="significant digits, 6..17")

    for name, fn in (("ait-scan", cmd_ait_scan), ("entangle-scan", cmd_entangle_scan), ("temp-scan", cmd_temp_scan)):
        sp = sub.add_parser(name, parents=[quiet])
        common(sp)
        sp.set_defaults(func=fn)
    sp = sub.add_parser("find-gap", parents=[quiet])
    common(sp, outputs=False)
    sp.set_defaults(func=cmd_find_gap)
    sp = sub.add_parser("unruh-check", parents=[quiet])
    sp.add_argument("--a", type=float, required=True, help="proper acceleration")
    sp.add_argument("--omega", type=float, required=True, help="energy gap")
    sp.set_defaults(func=cmd_unruh_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="ait-lab: %(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (ConfigError, SpecError) as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except SweepAborted:
        return EXIT_NUMERIC
    except AitLabError as exc:
        log.error("numerical error: %s: %s", type(exc).__name__, exc)
        return EXIT_NUMERIC
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
