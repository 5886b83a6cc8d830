"""Parameter sweeps over trajectory phases with deterministic CSV output.

A sweep walks a grid over up to three phase coordinates

    u: boost frequency times accelerated duration
    v: pi times outbound coast duration over delta
    w: pi times destination stay duration over delta

holding the remaining parameters fixed, and records one row per grid point.
For a heavy field (M > 0) the u coordinate is read as pi tau_bar / (4 M
delta), one unit per approximate period of the heavy-field waveform, and the
deficit column keeps its usual per-h**2 scaling (divide by M**4 to land on
the conventional heavy-field normalization).

Re-running a sweep with the same spec yields a byte-identical file: values
are written in shortest round-trip decimal form, comma separated, newline
terminated, UTF-8, rows in lexicographic axis order.  Worker count changes
scheduling only, never results.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import closedform
from .closedform import (
    kickstart_deficit,
    massive_limit_deficit,
    one_way_deficit,
    round_trip_deficit,
    two_way_deficit,
)
from .scenario import (
    Accelerated,
    Inertial,
    Scenario,
    alpha_centauri_scenario,
    kickstart_scenario,
    negativity_general,
    effective_transform,
    one_way_scenario,
    round_trip_scenario,
)
from .spectrum import CavityConfig, ValidityReport, rindler_frequency


class ConfigError(ValueError):
    """Raised for contradictory or unparseable sweep configuration."""


class NumericValidityError(ArithmeticError):
    """Raised when requested parameters leave the perturbative regime so far
    that results would be meaningless (for example a negative negativity)."""


__all__ = [
    "Axis",
    "SweepSpec",
    "SweepRow",
    "ConfigError",
    "NumericValidityError",
    "PRESETS",
    "preset_spec",
    "run_sweep",
    "parse_number",
    "parse_axis",
    "estimate_physical",
    "PhysicalEstimate",
    "format_estimate",
    "default_output_path",
]

OUTPUT_DIR_ENV = "CAVNEG_OUT_DIR"

SCENARIOS = ("one-way", "alpha-centauri", "round-trip", "kickstart", "custom")

BASE_FIELDS = (
    "scenario",
    "k",
    "h",
    "M",
    "u",
    "v",
    "w",
    "deficit_scaled",
    "negativity",
    "log_negativity",
    "method",
    "truncation_tail",
)
BOTH_FIELDS = BASE_FIELDS + ("deficit_general", "abs_difference")

_DEFAULT_FIXED = {
    "k": 1,
    "h": 0.01,
    "M": 0.0,
    "delta": 1.0,
    "n_max": 200,
    "r_max": None,
    "u": 0.0,
    "v": 0.0,
    "w": 0.0,
}


def parse_number(text: str) -> float:
    """Parse a decimal literal that may carry a pi token: ``pi``, ``2pi``,
    ``2*pi``, ``pi/3``, ``-2pi/3`` and plain floats are all accepted."""
    s = str(text).strip().lower().replace(" ", "")
    if not s:
        raise ConfigError("empty number")
    sign = 1.0
    if s[0] in "+-":
        sign = -1.0 if s[0] == "-" else 1.0
        s = s[1:]
    try:
        if "pi" in s:
            pre, _, post = s.partition("pi")
            pre = pre.rstrip("*")
            mult = float(pre) if pre else 1.0
            div = 1.0
            if post:
                if not post.startswith("/") or len(post) < 2:
                    raise ValueError(post)
                div = float(post[1:])
            return sign * mult * math.pi / div
        return sign * float(s)
    except ValueError:
        raise ConfigError(f"cannot parse number {text!r}") from None


@dataclass(frozen=True)
class Axis:
    """One swept coordinate: name in {u, v, w}, inclusive range, count >= 2."""

    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self) -> None:
        if self.name not in ("u", "v", "w"):
            raise ConfigError(f"axis name must be u, v or w, got {self.name!r}")
        if self.count < 2:
            raise ConfigError(f"axis {self.name}: count must be >= 2, got {self.count}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


def parse_axis(text: str) -> Axis:
    """Parse ``name=start:stop:count`` (pi tokens welcome in the bounds)."""
    name, sep, rng = text.partition("=")
    if not sep:
        raise ConfigError(f"axis must look like name=start:stop:count, got {text!r}")
    parts = rng.split(":")
    if len(parts) != 3:
        raise ConfigError(f"axis range must be start:stop:count, got {rng!r}")
    try:
        count = int(parts[2])
    except ValueError:
        raise ConfigError(f"axis count must be an integer, got {parts[2]!r}") from None
    return Axis(name.strip(), parse_number(parts[0]), parse_number(parts[1]), count)


@dataclass(frozen=True)
class SweepSpec:
    """Everything needed to reproduce one sweep.

    scenario: one of {one-way, alpha-centauri, round-trip, kickstart, custom}.
    axes: up to three distinct Axis entries; row order follows their order.
    fixed: overrides for {k, h, M, delta, n_max, r_max} and constant values
        of unswept phase coordinates {u, v, w}.
    mode: closed-form | general | both.
    output: CSV path, or None to skip writing.
    k_list: optional multi-curve override of the fixed k (one block per k).
    segments: trajectory for scenario=custom.
    workers: worker pool bound for the per-point pipeline modes.
    """

    scenario: str
    axes: tuple = ()
    fixed: dict = field(default_factory=dict)
    mode: str = "closed-form"
    output: str | None = None
    k_list: tuple | None = None
    segments: tuple | None = None
    workers: int = 1


def _validated(spec: SweepSpec) -> dict:
    if spec.scenario not in SCENARIOS:
        raise ConfigError(
            f"unknown scenario {spec.scenario!r}, expected one of {SCENARIOS}"
        )
    if spec.mode not in ("closed-form", "general", "both"):
        raise ConfigError(f"unknown mode {spec.mode!r}")
    names = [a.name for a in spec.axes]
    if len(names) != len(set(names)):
        raise ConfigError(f"axes must be distinct, got {names}")
    if len(names) > 3:
        raise ConfigError("at most three axes are supported")
    params = dict(_DEFAULT_FIXED)
    unknown = set(spec.fixed) - set(params)
    if unknown:
        raise ConfigError(f"unknown fixed parameters {sorted(unknown)}")
    params.update(spec.fixed)
    params["k"] = int(params["k"])
    params["n_max"] = int(params["n_max"])
    if params["r_max"] is not None:
        params["r_max"] = int(params["r_max"])
    for key in ("h", "M", "delta", "u", "v", "w"):
        params[key] = float(params[key])
    if params["k"] < 1:
        raise ConfigError(f"k must be >= 1, got {params['k']}")
    if params["delta"] <= 0:
        raise ConfigError(f"delta must be positive, got {params['delta']}")
    if params["M"] < 0:
        raise ConfigError(f"M must be non-negative, got {params['M']}")
    if not abs(params["h"]) < 2:
        raise NumericValidityError(
            f"|h| must stay below 2, got {params['h']}"
        )
    if spec.mode == "both" and "n_max" not in spec.fixed:
        raise ConfigError("mode=both requires n_max to be set explicitly")
    if spec.scenario == "custom":
        if spec.axes:
            raise ConfigError("scenario=custom takes no axes, it is a single run")
        if not spec.segments:
            raise ConfigError("scenario=custom needs segments")
        if spec.mode != "general":
            raise ConfigError("scenario=custom supports mode=general only")
    if params["M"] > 0 and spec.scenario != "one-way" and spec.mode != "general":
        raise ConfigError(
            "closed forms at M > 0 exist for the one-way scenario only; "
            "use mode=general"
        )
    if spec.k_list is not None:
        ks = tuple(int(k) for k in spec.k_list)
        if not ks or any(k < 1 for k in ks):
            raise ConfigError(f"k_list must hold positive indices, got {spec.k_list}")
        params["k_list"] = ks
    else:
        params["k_list"] = (params["k"],)
    if spec.workers < 1:
        raise ConfigError(f"workers must be >= 1, got {spec.workers}")
    return params


def _coordinate_grids(spec: SweepSpec, params: dict):
    if not spec.axes:
        shape: tuple = ()
        grids = {}
    else:
        values = [axis.values() for axis in spec.axes]
        shape = tuple(axis.count for axis in spec.axes)
        mesh = np.meshgrid(*values, indexing="ij")
        grids = {axis.name: mesh[i] for i, axis in enumerate(spec.axes)}
    coords = {}
    for name in ("u", "v", "w"):
        coords[name] = grids.get(name, np.full(shape, params[name]))
    return shape, coords


def _tau_bar(u: float, cfg: CavityConfig) -> float:
    if cfg.M == 0:
        return u / rindler_frequency(1, cfg)
    return 4.0 * cfg.M * cfg.delta * u / math.pi


def _build_scenario(
    name: str, u: float, v: float, w: float, cfg: CavityConfig, segments
) -> Scenario:
    if name == "custom":
        return Scenario(segments, cfg)
    tau_bar = _tau_bar(u, cfg)
    tau_prime = v * cfg.delta / math.pi
    tau_dprime = w * cfg.delta / math.pi
    if name == "one-way":
        return one_way_scenario(tau_bar, cfg)
    if name == "alpha-centauri":
        return alpha_centauri_scenario(tau_bar, tau_prime, cfg)
    if name == "round-trip":
        return round_trip_scenario(tau_bar, tau_prime, tau_dprime, cfg)
    if name == "kickstart":
        return kickstart_scenario(tau_bar, cfg)
    raise ConfigError(f"unknown scenario {name!r}")


_N_FACTORS = {"one-way": 1, "alpha-centauri": 2, "round-trip": 3}


def _closed_grid(spec: SweepSpec, params: dict, coords: dict, k: int):
    """Vectorized closed-form deficit over the whole grid, plus a tail bound."""
    name = spec.scenario
    M = params["M"]
    r_max = params["r_max"]
    u, v, w = coords["u"], coords["v"], coords["w"]
    if name == "kickstart":
        return np.full(u.shape, kickstart_deficit(k)), closedform._a_tail(
            k, closedform._auto_r_max(k, 1e-14, 1.0)
        )
    if M > 0:
        tau = 4.0 * M * params["delta"] * np.asarray(u, dtype=float) / math.pi
        deficit = massive_limit_deficit(k, M, tau, params["delta"], params["n_max"])
        return np.asarray(deficit), closedform._massive_tail(k, M, params["n_max"])
    nfac = _N_FACTORS[name]
    r_used = r_max if r_max is not None else closedform._auto_r_max(k, 1e-12, 4.0**nfac)
    tail = closedform._a_tail(k, r_used) * 4.0**nfac
    p = np.exp(1j * u)
    if name == "one-way":
        return np.asarray(one_way_deficit(k, p, r_max)), tail
    if name == "alpha-centauri":
        return np.asarray(two_way_deficit(k, p, np.exp(1j * v), r_max)), tail
    return (
        np.asarray(round_trip_deficit(k, p, np.exp(1j * v), np.exp(1j * w), r_max)),
        tail,
    )


def _general_grid(spec: SweepSpec, params: dict, coords: dict, k: int):
    """Per-point pipeline deficits; workers parallelize scheduling only."""
    cfg = CavityConfig(
        delta=params["delta"],
        M=params["M"],
        h=params["h"],
        k=k,
        n_max=params["n_max"],
    )
    u = np.atleast_1d(coords["u"]).ravel()
    v = np.atleast_1d(coords["v"]).ravel()
    w = np.atleast_1d(coords["w"]).ravel()
    shape = coords["u"].shape

    def point(i: int):
        s = _build_scenario(spec.scenario, u[i], v[i], w[i], cfg, spec.segments)
        res = negativity_general(effective_transform(s), k, cfg.h, cfg.M)
        return res.deficit_scaled, res.truncation_tail

    npoints = u.size
    if spec.workers > 1:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            results = list(pool.map(point, range(npoints)))
    else:
        results = [point(i) for i in range(npoints)]
    deficit = np.array([r[0] for r in results]).reshape(shape)
    tail = max((r[1] for r in results), default=0.0)
    return deficit, tail


def _format_value(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


@dataclass(frozen=True)
class SweepRow:
    """One CSV row; negativity always equals 1/2 - h**2 deficit_scaled."""

    scenario: str
    k: int
    h: float
    M: float
    u: float
    v: float
    w: float
    deficit_scaled: float
    negativity: float
    log_negativity: float
    method: str
    truncation_tail: float
    deficit_general: float | None = None
    abs_difference: float | None = None


def run_sweep(spec: SweepSpec) -> str:
    """Evaluate the grid and return the CSV text (writing spec.output if set).

    One row per grid point per k; with mode=both each row carries the
    closed-form value, the pipeline value, and their absolute difference.
    """
    params = _validated(spec)
    shape, coords = _coordinate_grids(spec, params)
    h = params["h"]
    M = params["M"]
    fields = BOTH_FIELDS if spec.mode == "both" else BASE_FIELDS
    lines = [",".join(fields)]
    for k in params["k_list"]:
        closed = general = None
        if spec.mode in ("closed-form", "both"):
            closed, closed_tail = _closed_grid(spec, params, coords, k)
        if spec.mode in ("general", "both"):
            general, general_tail = _general_grid(spec, params, coords, k)
        if spec.mode == "closed-form":
            deficit, tail, method = closed, closed_tail, "closed-form"
        elif spec.mode == "general":
            deficit, tail, method = general, general_tail, "general"
        else:
            deficit, tail, method = closed, closed_tail + general_tail, "both"
        negativity = 0.5 - h * h * np.asarray(deficit)
        if np.any(negativity < 0):
            raise NumericValidityError(
                f"h = {h} drives the negativity negative at k = {k}; "
                "reduce h or the deficit scale"
            )
        for idx in np.ndindex(shape) if shape else [()]:
            d = float(np.asarray(deficit)[idx])
            neg = 0.5 - h * h * d
            row = [
                spec.scenario,
                k,
                h,
                M,
                float(coords["u"][idx]),
                float(coords["v"][idx]),
                float(coords["w"][idx]),
                d,
                neg,
                math.log1p(neg),
                method,
                tail,
            ]
            if spec.mode == "both":
                g = float(np.asarray(general)[idx])
                row.extend([g, abs(d - g)])
            lines.append(",".join(_format_value(v) for v in row))
    text = "\n".join(lines) + "\n"
    if spec.output:
        try:
            with open(spec.output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write sweep output to {spec.output!r}: {exc}") from exc
    return text


TWO_PI = 2.0 * math.pi

PRESETS = {
    "fig2": dict(
        scenario="one-way",
        axes=(Axis("u", 0.0, TWO_PI, 201),),
        fixed={"k": 1, "h": 0.01, "M": 0.0},
    ),
    "fig3": dict(
        scenario="alpha-centauri",
        axes=(Axis("u", 0.0, TWO_PI, 101), Axis("v", 0.0, TWO_PI, 101)),
        fixed={"k": 1, "h": 0.01, "M": 0.0},
    ),
    "fig4a": dict(
        scenario="round-trip",
        axes=(Axis("u", 0.0, TWO_PI, 101), Axis("v", 0.0, TWO_PI, 101)),
        fixed={"k": 1, "h": 0.01, "M": 0.0, "w": 0.0},
    ),
    "fig4b": dict(
        scenario="round-trip",
        axes=(Axis("u", 0.0, TWO_PI, 101), Axis("v", 0.0, TWO_PI, 101)),
        fixed={"k": 1, "h": 0.01, "M": 0.0, "w": TWO_PI / 3.0},
    ),
    "fig4c": dict(
        scenario="round-trip",
        axes=(Axis("u", 0.0, TWO_PI, 101), Axis("v", 0.0, TWO_PI, 101)),
        fixed={"k": 1, "h": 0.01, "M": 0.0, "w": 2.0 * TWO_PI / 3.0},
    ),
    "fig5a": dict(
        scenario="one-way",
        axes=(Axis("u", 0.0, 3.0, 601),),
        fixed={"h": 1e-5, "M": 1e3, "n_max": 200},
        k_list=(1, 2, 3, 4),
    ),
    # k = 30 beats against neighbours up to |k^2 - n^2| ~ 190, so the grid
    # needs a few samples per 1/190 of a u unit
    "fig5b": dict(
        scenario="one-way",
        axes=(Axis("u", 0.0, 3.0, 2401),),
        fixed={"h": 1e-5, "M": 1e3, "n_max": 200},
        k_list=(30,),
    ),
}


def preset_spec(name: str, output: str | None = None, **overrides) -> SweepSpec:
    """Materialize a named preset; keyword overrides patch the SweepSpec."""
    try:
        stored = PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown preset {name!r}, expected one of {sorted(PRESETS)}"
        ) from None
    base = dict(scenario=stored["scenario"], axes=stored["axes"], mode="closed-form")
    base["fixed"] = dict(stored["fixed"])
    base["k_list"] = stored.get("k_list")
    base["output"] = output
    spec = SweepSpec(**base)
    if overrides:
        fixed_overrides = overrides.pop("fixed", None)
        if fixed_overrides:
            merged = dict(spec.fixed)
            merged.update(fixed_overrides)
            overrides["fixed"] = merged
        spec = replace(spec, **overrides)
    return spec


def default_output_path(stem: str, out: str | None) -> str:
    """Resolve the output path, honouring the output-directory variable for
    bare file names."""
    if out is None:
        out = f"{stem}.csv"
    if os.path.dirname(out):
        return out
    base = os.environ.get(OUTPUT_DIR_ENV, "")
    return os.path.join(base, out) if base else out


@dataclass(frozen=True)
class PhysicalEstimate:
    """Dimensionless parameters and the peak single-leg degradation for a
    laboratory setting."""

    h: float
    M: float
    k: int
    validity: ValidityReport
    path: str
    peak_deficit_scaled: float
    peak_degradation: float


def estimate_physical(
    accel: float,
    delta: float,
    mass: float | None = None,
    transverse_wavelength: float | None = None,
    k: int = 1,
) -> PhysicalEstimate:
    """Convert laboratory numbers and report the peak one-way deficit.

    The massless closed form applies at M = 0; a heavy field (k/M <= 0.01)
    uses the heavy-field waveform sampled over one period.  Intermediate
    masses have no closed form here.
    """
    from .spectrum import physical_to_dimensionless

    h, M, report = physical_to_dimensionless(
        accel, delta, mass, transverse_wavelength, k
    )
    if M == 0:
        path = "massless"
        peak = 4.0 * closedform._q_at_one(k)
    elif k / M <= 0.01:
        path = "heavy-field"
        period = 4.0 * M * delta / math.pi
        tau = np.linspace(0.0, period, 2049)
        peak = float(np.max(massive_limit_deficit(k, M, tau, delta)))
    else:
        raise ConfigError(
            f"k/M = {k / M:.3g} sits between the massless and heavy-field "
            "closed forms; no estimate available"
        )
    return PhysicalEstimate(
        h=h,
        M=M,
        k=k,
        validity=report,
        path=path,
        peak_deficit_scaled=peak,
        peak_degradation=h * h * peak,
    )


def format_estimate(est: PhysicalEstimate) -> str:
    flags = est.validity
    lines = [
        f"h = {est.h:.6g}",
        f"M = {est.M:.6g}",
        f"k = {est.k}",
        f"h*M^2 = {est.h * est.M * est.M:.6g}",
        f"perturbative_ok = {flags.perturbative_ok}",
        f"massive_ok = {flags.massive_ok}",
        f"h_bound_ok = {flags.h_bound_ok}",
        f"path = {est.path}",
        f"peak deficit_scaled = {est.peak_deficit_scaled:.6g}",
        f"peak degradation (1/2 - negativity) = {est.peak_degradation:.6g}",
    ]
    return "\n".join(lines)
