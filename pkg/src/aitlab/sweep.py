"""Run configurations, gap and temperature sweeps, and their CSV/SVG output."""
from __future__ import annotations

import hashlib
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Callable, Optional, Sequence, Union

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .amplitudes import AmplitudePair, Window, amplitude_numeric, amplitude_pair, default_window
from .entanglement import DetectorChannel, InitialAmplitudes, concurrence_xstate, evolve_xstate, PERTURBATIVE_LIMIT
from .errors import AitLabError, ConfigError, SpecError
from .fieldstate import FieldState, Fock, Thermal, Vacuum, ait_ratio, mean_occupation, transition_probability
from .worldline import PhaseFunction, PhaseSlope, WorldlineSpec, build_phase_function

log = logging.getLogger(__name__)

__all__ = [
    "GapSweep",
    "TempSweep",
    "Outputs",
    "RunConfig",
    "SweepRow",
    "SweepAborted",
    "parse_config",
    "load_config",
    "resolve_threads",
    "evaluate_point",
    "run_gap_sweep",
    "run_temperature_sweep",
    "run_sweep",
    "format_number",
    "config_hash",
    "render_csv",
    "emit_outputs",
    "is_non_increasing",
]

CSV_HEADER = "sweep_value,abs_term,unruh_term,ratio,concurrence"
MONOTONE_SLACK = 1e-10


@dataclass(frozen=True)
class GapSweep:
    lo: float
    hi: float
    n: int = 400
    log_spaced: bool = True
    # bracket for find-gap; defaults to [lo, hi]
    search_lo: Optional[float] = None
    search_hi: Optional[float] = None

    def grid(self) -> np.ndarray:
        if self.log_spaced:
            return np.geomspace(self.lo, self.hi, self.n)
        return np.linspace(self.lo, self.hi, self.n)

    @property
    def search_range(self) -> tuple[float, float]:
        lo = self.lo if self.search_lo is None else self.search_lo
        hi = self.hi if self.search_hi is None else self.search_hi
        return lo, hi


@dataclass(frozen=True)
class TempSweep:
    beta_lo: float
    beta_hi: float
    omega: float
    n: int = 100

    def temperatures(self) -> np.ndarray:
        """Linearly spaced T = 1/beta, ascending."""
        return np.linspace(1.0 / self.beta_hi, 1.0 / self.beta_lo, self.n)


@dataclass(frozen=True)
class Outputs:
    csv_path: Optional[str] = None
    svg_path: Optional[str] = None
    precision: int = 12


@dataclass(frozen=True)
class RunConfig:
    worldline: WorldlineSpec
    field: FieldState
    window: Window
    sweep: Union[GapSweep, TempSweep]
    init_state: InitialAmplitudes = field(default_factory=InitialAmplitudes.bell)
    mode_k: float = 1.0
    coupling: float = 0.01
    amplitude_method: str = "analytic"
    v2_scan: tuple[float, ...] = ()
    outputs: Outputs = Outputs()

    def phase_function(self) -> PhaseFunction:
        return build_phase_function(self.worldline, self.mode_k)


@dataclass(frozen=True)
class SweepRow:
    sweep_value: float
    abs_term: float
    unruh_term: float
    ratio: float
    concurrence: float


class SweepAborted(AitLabError):
    """A sweep point failed; ``rows`` holds the points finished before it, in order."""

    def __init__(self, cause: BaseException, rows: list):
        self.cause = cause
        self.rows = rows
        super().__init__(f"sweep aborted: {type(cause).__name__}: {cause}")


# ---------------------------------------------------------------- parsing

_SCHEMA: dict[str, dict[str, tuple]] = {
    "worldline": {"kind": (str,), "v0": (float,), "v1": (float,), "v2": (float,), "T1": (float,),
                  "T2": (float,), "a": (float,), "v2_scan": (list,)},
    "field": {"state": (str,), "beta": (float,), "n": (int,)},
    "detector": {"mode_k": (float,), "coupling": (float,), "amplitude_method": (str,)},
    "window": {"switching": (str,), "pad_fraction": (float,), "ramp_width": (float,),
               "tau_min": (float,), "tau_max": (float,)},
    "sweep": {"kind": (str,), "lo": (float,), "hi": (float,), "n": (int,), "log_spaced": (bool,),
              "search_lo": (float,), "search_hi": (float,), "beta_lo": (float,), "beta_hi": (float,),
              "omega": (float,)},
    "initial_state": {"c_ge": (list, float), "c_eg": (list, float)},
    "output": {"csv": (str,), "svg": (str,), "precision": (int,)},
}


class _Section:
    """Typed access to one config table, remembering which defaults were used."""

    def __init__(self, name: str, table: dict, defaults_used: list):
        self.name = name
        self.table = table
        self.defaults_used = defaults_used

    def _check(self, key, value, kinds):
        path = f"{self.name}.{key}"
        for kind in kinds:
            if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
                if not math.isfinite(value):
                    raise ConfigError(path, "must be finite")
                return float(value)
            if kind is int and isinstance(value, int) and not isinstance(value, bool):
                return value
            if kind is bool and isinstance(value, bool):
                return value
            if kind is str and isinstance(value, str):
                return value
            if kind is list and isinstance(value, list):
                return value
        names = " or ".join(k.__name__ for k in kinds)
        raise ConfigError(path, f"expected {names}, got {type(value).__name__}")

    def get(self, key, default=None):
        kinds = _SCHEMA[self.name][key]
        if key in self.table:
            return self._check(key, self.table[key], kinds)
        if default is not None:
            self.defaults_used.append((f"{self.name}.{key}", default))
        return default

    def require(self, key):
        if key not in self.table:
            raise ConfigError(f"{self.name}.{key}", "required key is missing")
        return self.get(key)


def _complex_entry(path: str, value) -> complex:
    if isinstance(value, float):
        return complex(value)
    if len(value) != 2 or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        raise ConfigError(path, "expected a real number or a [re, im] pair")
    return complex(float(value[0]), float(value[1]))


def _guard(path: str, build: Callable[[], Any]):
    try:
        return build()
    except SpecError as exc:
        raise ConfigError(path, str(exc)) from None


def parse_config(text: str) -> RunConfig:
    """Validate a TOML run configuration.

    Unknown sections and keys are rejected. Defaults that were filled in are
    logged at INFO level.

    Raises
    ------
    ConfigError
        With the dotted key path of the offending entry.
    """
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("<document>", f"not valid TOML: {exc}") from None
    for name, table in doc.items():
        if name not in _SCHEMA:
            raise ConfigError(name, "unknown section")
        if not isinstance(table, dict):
            raise ConfigError(name, "expected a table")
        for key in table:
            if key not in _SCHEMA[name]:
                raise ConfigError(f"{name}.{key}", "unknown key")
    used: list = []
    sec = {name: _Section(name, doc.get(name, {}), used) for name in _SCHEMA}

    # worldline
    wl = sec["worldline"]
    kind = wl.get("kind", "phase_slope")
    v2_scan: tuple = ()
    if kind == "phase_slope":
        v2 = wl.get("v2")
        if v2 is None:
            used.append(("worldline.v2", "v0"))
        if "T1" in wl.table and "T2" in wl.table and not wl.get("T2") > wl.get("T1"):
            raise ConfigError("worldline.T2", "must exceed worldline.T1")
        worldline = _guard("worldline", lambda: PhaseSlope(
            wl.require("v0"), wl.require("v1"), wl.require("T1"), wl.require("T2"), v2))
        if "a" in wl.table:
            raise ConfigError("worldline.a", "only used with kind = 'eternal'")
        scan = wl.get("v2_scan")
        if scan is not None:
            v2_scan = tuple(wl._check("v2_scan", v, (float,)) for v in scan)
            if not v2_scan:
                raise ConfigError("worldline.v2_scan", "must not be empty")
    elif kind == "eternal":
        raise ConfigError("worldline.kind", "eternal worldlines are only available through unruh-check")
    else:
        raise ConfigError("worldline.kind", f"expected 'phase_slope', got {kind!r}")

    # field
    fs = sec["field"]
    state = fs.get("state", "thermal")
    if state == "thermal":
        field_state = _guard("field.beta", lambda: Thermal(fs.require("beta")))
    elif state == "vacuum":
        field_state = Vacuum()
    elif state == "fock":
        field_state = _guard("field.n", lambda: Fock(fs.require("n")))
    else:
        raise ConfigError("field.state", f"expected thermal, vacuum or fock, got {state!r}")
    for key in ("beta", "n"):
        if key in fs.table and not (state, key) in (("thermal", "beta"), ("fock", "n")):
            raise ConfigError(f"field.{key}", f"not used with state = {state!r}")

    # detector
    det = sec["detector"]
    mode_k = det.get("mode_k", 1.0)
    if not mode_k > 0:
        raise ConfigError("detector.mode_k", "must be positive")
    coupling = det.get("coupling", 0.01)
    if coupling < 0:
        raise ConfigError("detector.coupling", "must be non-negative")
    method = det.get("amplitude_method", "analytic")
    if method not in ("analytic", "numeric"):
        raise ConfigError("detector.amplitude_method", f"expected analytic or numeric, got {method!r}")

    # window
    win = sec["window"]
    switching = win.get("switching", "sharp")
    ramp = win.get("ramp_width", 0.0)
    if "tau_min" in win.table or "tau_max" in win.table:
        if "pad_fraction" in win.table:
            raise ConfigError("window.pad_fraction", "give either pad_fraction or tau_min/tau_max")
        window = _guard("window", lambda: Window(win.require("tau_min"), win.require("tau_max"), switching, ramp))
    else:
        pad = win.get("pad_fraction", 0.1)
        if pad < 0:
            raise ConfigError("window.pad_fraction", "must be non-negative")
        window = _guard("window", lambda: default_window(worldline, pad, switching, ramp))
    if window.tau_min > 0 or window.tau_max < worldline.T2:
        raise ConfigError("window", f"[{window.tau_min}, {window.tau_max}] must contain [0, T2]")

    # sweep
    sw = sec["sweep"]
    skind = sw.get("kind", "gap")
    if skind not in ("gap", "temperature"):
        raise ConfigError("sweep.kind", f"expected gap or temperature, got {skind!r}")
    gap_keys = {"lo", "hi", "log_spaced", "search_lo", "search_hi"}
    temp_keys = {"beta_lo", "beta_hi", "omega"}
    foreign = temp_keys if skind == "gap" else gap_keys
    for key in sw.table:
        if key in foreign:
            raise ConfigError(f"sweep.{key}", f"not used with kind = {skind!r}")
    if skind == "gap":
        n = sw.get("n", 400)
        sweep = GapSweep(sw.require("lo"), sw.require("hi"), n, sw.get("log_spaced", True),
                         sw.get("search_lo"), sw.get("search_hi"))
        if not 0 < sweep.lo < sweep.hi:
            raise ConfigError("sweep.lo", "need 0 < lo < hi")
        s_lo, s_hi = sweep.search_range
        if not 0 < s_lo < s_hi:
            raise ConfigError("sweep.search_lo", "need 0 < search_lo < search_hi")
    elif skind == "temperature":
        n = sw.get("n", 100)
        sweep = TempSweep(sw.require("beta_lo"), sw.require("beta_hi"), sw.require("omega"), n)
        if not 0 < sweep.beta_lo < sweep.beta_hi:
            raise ConfigError("sweep.beta_lo", "need 0 < beta_lo < beta_hi")
        if not sweep.omega > 0:
            raise ConfigError("sweep.omega", "must be positive")
        if state != "thermal":
            raise ConfigError("field.state", "temperature sweeps need a thermal field")
    if sweep.n < 2:
        raise ConfigError("sweep.n", "must be at least 2")

    # initial state
    ini = sec["initial_state"]
    if ini.table:
        c_ge = _complex_entry("initial_state.c_ge", ini.require("c_ge"))
        c_eg = _complex_entry("initial_state.c_eg", ini.require("c_eg"))
        init = _guard("initial_state", lambda: InitialAmplitudes(c_ge, c_eg))
    else:
        used.append(("initial_state", "bell"))
        init = InitialAmplitudes.bell()

    # outputs
    out = sec["output"]
    precision = out.get("precision", 12)
    if not 6 <= precision <= 17:
        raise ConfigError("output.precision", f"must lie in [6, 17], got {precision}")
    outputs = Outputs(out.get("csv"), out.get("svg"), precision)

    for path, value in used:
        log.info("default %s = %r", path, value)
    return RunConfig(worldline, field_state, window, sweep, init, mode_k, coupling, method, v2_scan, outputs)


def load_config(path: str) -> RunConfig:
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ConfigError("<document>", f"not UTF-8: {exc}") from None
    return parse_config(text)


def resolve_threads(flag: Optional[int] = None) -> int:
    """--threads, else AIT_LAB_THREADS, else the number of CPUs."""
    if flag is not None:
        if flag < 1:
            raise ConfigError("--threads", "must be at least 1")
        return flag
    env = os.environ.get("AIT_LAB_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigError("AIT_LAB_THREADS", f"not an integer: {env!r}") from None
        if n < 1:
            raise ConfigError("AIT_LAB_THREADS", "must be at least 1")
        return n
    return os.cpu_count() or 1


# ---------------------------------------------------------------- sweeps

def _pair(cfg: RunConfig, pf: PhaseFunction, omega: float) -> AmplitudePair:
    if cfg.amplitude_method == "numeric":
        return AmplitudePair(
            amplitude_numeric(pf, omega, "-", cfg.window),
            amplitude_numeric(pf, omega, "+", cfg.window),
            omega, pf.mode_k, cfg.window,
        )
    return amplitude_pair(pf, omega, cfg.window)


def _occupation(s: FieldState, k: float) -> float:
    return float(s.n) if isinstance(s, Fock) else mean_occupation(s, k)


def evaluate_point(cfg: RunConfig, ap: AmplitudePair, s: FieldState, sweep_value: float) -> tuple[SweepRow, float]:
    """One pipeline evaluation: transition terms, ratio and concurrence.

    Returns the row and the perturbative strength of the detector channel.
    """
    k = cfg.mode_k
    tp = transition_probability(ap, s, k, cfg.coupling)
    ratio = ait_ratio(ap, s, k)
    ch = DetectorChannel(ap, _occupation(s, k), cfg.coupling)
    rho = evolve_xstate(cfg.init_state, ch, ch, check_perturbative=False)
    row = SweepRow(float(sweep_value), tp.abs_term, tp.unruh_term, ratio, concurrence_xstate(rho))
    return row, ch.strength


def _run_indexed(fn: Callable[[int], tuple], n: int, threads: int) -> list:
    """fn(i) for i < n, assembled by index; the first failure cancels the rest."""
    results: list = [None] * n
    if threads <= 1:
        for i in range(n):
            try:
                results[i] = fn(i)
            except AitLabError as exc:
                raise SweepAborted(exc, [r for r in results[:i]]) from exc
        return results
    ex = ThreadPoolExecutor(max_workers=threads)
    futures = [ex.submit(fn, i) for i in range(n)]
    try:
        for i, fut in enumerate(futures):
            try:
                results[i] = fut.result()
            except AitLabError as exc:
                ex.shutdown(wait=True, cancel_futures=True)
                raise SweepAborted(exc, [r for r in results[:i]]) from exc
    finally:
        ex.shutdown(wait=True, cancel_futures=True)
    return results


def _report_strength(strengths: Sequence[float]) -> None:
    worst = max(strengths)
    if worst > PERTURBATIVE_LIMIT:
        log.warning(
            "largest lambda^2 (<n>+1) |I|^2 in this sweep is %.3g (> %g); first-order elements are used as given",
            worst, PERTURBATIVE_LIMIT,
        )


def run_gap_sweep(cfg: RunConfig, threads: int = 1) -> list[SweepRow]:
    """One row per Omega of the gap grid, ascending in Omega."""
    if not isinstance(cfg.sweep, GapSweep):
        raise ConfigError("sweep.kind", "run_gap_sweep needs a gap sweep")
    pf = cfg.phase_function()
    grid = np.sort(cfg.sweep.grid())

    def point(i):
        om = float(grid[i])
        return evaluate_point(cfg, _pair(cfg, pf, om), cfg.field, om)

    out = _run_indexed(point, len(grid), threads)
    _report_strength([s for _, s in out])
    return [r for r, _ in out]


def run_temperature_sweep(cfg: RunConfig, threads: int = 1) -> list[SweepRow]:
    """Rows over T = 1/beta ascending at fixed Omega; sweep_value holds beta."""
    if not isinstance(cfg.sweep, TempSweep):
        raise ConfigError("sweep.kind", "run_temperature_sweep needs a temperature sweep")
    pf = cfg.phase_function()
    ap = _pair(cfg, pf, cfg.sweep.omega)
    temps = cfg.sweep.temperatures()

    def point(i):
        beta = 1.0 / float(temps[i])
        return evaluate_point(cfg, ap, Thermal(beta), beta)

    out = _run_indexed(point, len(temps), threads)
    _report_strength([s for _, s in out])
    return [r for r, _ in out]


def run_sweep(cfg: RunConfig, threads: int = 1) -> list[SweepRow]:
    if isinstance(cfg.sweep, TempSweep):
        return run_temperature_sweep(cfg, threads)
    return run_gap_sweep(cfg, threads)


def is_non_increasing(values: Sequence[float], slack: float = MONOTONE_SLACK) -> bool:
    return all(b <= a + slack for a, b in zip(values[:-1], values[1:]))


# ---------------------------------------------------------------- output

def format_number(x: float, precision: int) -> str:
    """Positional decimal with exactly ``precision`` significant digits."""
    if not math.isfinite(x):
        raise ValueError(f"cannot format non-finite value {x!r}")
    mant, _, exp = f"{x:.{precision - 1}e}".partition("e")
    e = int(exp)
    sign = "-" if mant.startswith("-") else ""
    digits = mant.lstrip("-").replace(".", "")
    if e < 0:
        return f"{sign}0.{'0' * (-e - 1)}{digits}"
    if e + 1 >= len(digits):
        return sign + digits + "0" * (e + 1 - len(digits))
    return f"{sign}{digits[:e + 1]}.{digits[e + 1:]}"


def _canonical(cfg: RunConfig) -> dict:
    d = {
        "worldline": {"kind": type(cfg.worldline).__name__, **asdict(cfg.worldline)},
        "field": {"state": type(cfg.field).__name__, **asdict(cfg.field)},
        "window": asdict(cfg.window),
        "sweep": {"kind": type(cfg.sweep).__name__, **asdict(cfg.sweep)},
        "init_state": [repr(cfg.init_state.c_ge), repr(cfg.init_state.c_eg)],
        "mode_k": cfg.mode_k,
        "coupling": cfg.coupling,
        "amplitude_method": cfg.amplitude_method,
        "v2_scan": list(cfg.v2_scan),
        "precision": cfg.outputs.precision,
    }
    return d


def config_hash(cfg: RunConfig) -> str:
    """sha256 of the resolved configuration; output paths are excluded."""
    blob = json.dumps(_canonical(cfg), sort_keys=True, default=repr).encode()
    return hashlib.sha256(blob).hexdigest()


def render_csv(rows: Sequence[SweepRow], cfg: RunConfig) -> str:
    p = cfg.outputs.precision
    lines = [f"# ait-lab v{__version__} config-hash={config_hash(cfg)}", CSV_HEADER]
    for r in rows:
        lines.append(",".join(format_number(v, p) for v in (r.sweep_value, r.abs_term, r.unruh_term, r.ratio, r.concurrence)))
    return "\n".join(lines) + "\n"


def _atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def emit_outputs(rows: Sequence[SweepRow], cfg: RunConfig, *, partial: bool = False) -> list[str]:
    """Write the CSV (and SVG if configured). Returns the paths written.

    With ``partial`` the CSV goes to ``<csv>.partial`` and no SVG is drawn.
    Raises OSError on I/O failure.
    """
    if not rows and not partial:
        raise ValueError("no rows to write")
    written = []
    text = render_csv(rows, cfg)
    path = cfg.outputs.csv_path
    if path is None:
        raise ValueError("no CSV path configured")
    if partial:
        path = path + ".partial"
    _atomic_write(path, text)
    written.append(path)
    if cfg.outputs.svg_path and not partial:
        from .svg import sweep_svg

        _atomic_write(cfg.outputs.svg_path, sweep_svg(rows, cfg))
        written.append(cfg.outputs.svg_path)
    return written


def with_outputs(cfg: RunConfig, csv_path=None, svg_path=None, precision=None) -> RunConfig:
    out = cfg.outputs
    return replace(cfg, outputs=Outputs(
        csv_path if csv_path is not None else out.csv_path,
        svg_path if svg_path is not None else out.svg_path,
        precision if precision is not None else out.precision,
    ))
