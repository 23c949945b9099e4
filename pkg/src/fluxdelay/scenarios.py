"""Named experiments: configuration validation, dispatch and deterministic output.

A configuration is a JSON object::

    {"scenario": "delay-sweep",
     "circuit": {"C_c": 1e-14, ...},      # SI values, defaults = reference circuit
     "output_dir": "out/sweep",
     ... scenario-specific keys ...}

Numeric grids may be given as explicit lists or as ``{"logspace": [a, b, n]}``
/ ``{"linspace": [a, b, n]}`` (end points inclusive, ``a`` and ``b`` are the
actual values, not exponents).
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping

import numpy as np

from . import __version__, analytics, kgtl, ode, pde
from .errors import ConfigError, DomainError, FluxDelayError, NoCrossingError
from .kink import KinkSpec
from .params import CircuitParams, DerivedParams, derive

SCENARIOS = ("params-dump", "delay-sweep", "separation", "pde-vs-ode", "decay-curve", "transitions")

# scenario -> key -> default
DEFAULTS: dict[str, dict[str, Any]] = {
    "params-dump": {},
    "delay-sweep": {
        "u0": {"logspace": [0.002, 0.1, 20]},
        "alpha": [1e-6, 1e-5, 1e-4, 1e-3],
        "dtau": 0.1,
        "write_trajectories": False,
    },
    "separation": {
        "u0": 0.01,
        "xi0": [5.75, 5.85],
        "alpha": 1e-6,
        "gamma": -0.1,
        "xi_b": 15.0,
        "length": 100.0,
        "dxi": pde.DEFAULT_DXI,
        "dtau": pde.DEFAULT_DTAU,
        "boundary": "fixed",
        "snapshot_times": [0.0, 100.0, 200.0, 300.0, 350.0, 400.0],
    },
    "pde-vs-ode": {
        "u0": [0.01, 0.02, 0.05],
        "alpha": 1e-6,
        "dxi": pde.DEFAULT_DXI,
        "dtau": pde.DEFAULT_DTAU,
        "ode_dtau": 0.01,
        "boundary": "open",
        "launch_distance": ode.LAUNCH_DISTANCE,
    },
    "decay-curve": {
        "alpha": 1e-5,
        "frequencies_hz": [1e9, 2e9, 3e9, 3.7e9, 5e9, 1e10, 2e10, 3e10, 4e10, 5e10],
    },
    "transitions": {
        "u0": {"logspace": [0.002, 0.1, 20]},
        "n_max": 3,
    },
}

_GRID_KEYS = {"u0", "alpha", "xi0", "snapshot_times", "frequencies_hz"}


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    circuit: CircuitParams
    output_dir: str
    options: Mapping[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "scenario": self.scenario,
            "circuit": self.circuit.to_dict(),
            "output_dir": self.output_dir,
            **{k: v for k, v in self.options.items()},
        }


@dataclass
class RunManifest:
    config: dict
    derived: dict
    version: str
    duration_s: float
    outputs: list = field(default_factory=list)
    thresholds: dict = field(default_factory=dict)

    def to_dict(self):
        return dataclasses.asdict(self)


def _expand_grid(value, key, problems):
    if isinstance(value, Mapping):
        if len(value) != 1 or next(iter(value)) not in ("logspace", "linspace"):
            problems.append(f"{key}: grid object must be {{'logspace'|'linspace': [a, b, n]}}")
            return None
        kind, spec = next(iter(value.items()))
        try:
            a, b, n = float(spec[0]), float(spec[1]), int(spec[2])
        except (TypeError, ValueError, IndexError):
            problems.append(f"{key}: {kind} needs [start, stop, count]")
            return None
        if n < 1:
            problems.append(f"{key}: grid must be non-empty")
            return None
        if kind == "logspace":
            if a <= 0 or b <= 0:
                problems.append(f"{key}: logspace end points must be > 0")
                return None
            return [float(x) for x in np.geomspace(a, b, n)]
        return [float(x) for x in np.linspace(a, b, n)]
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return [float(value)]
    if isinstance(value, list):
        try:
            return [float(x) for x in value]
        except (TypeError, ValueError):
            problems.append(f"{key}: all entries must be numbers")
            return None
    problems.append(f"{key}: expected a number, a list or a grid object")
    return None


def validate_config(document: Mapping[str, Any]) -> ScenarioConfig:
    """Check a configuration document and fill in defaults.

    Every violation is collected; a single :class:`ConfigError` lists them all.
    """
    problems: list[str] = []
    if not isinstance(document, Mapping):
        raise ConfigError("configuration must be a JSON object")
    scenario = document.get("scenario")
    if scenario not in SCENARIOS:
        problems.append(f"scenario: must be one of {', '.join(SCENARIOS)} (got {scenario!r})")
        raise ConfigError(problems)

    circuit_doc = document.get("circuit", {}) or {}
    circuit = None
    if not isinstance(circuit_doc, Mapping):
        problems.append("circuit: must be an object of SI values")
    else:
        known = {f.name for f in dataclasses.fields(CircuitParams)}
        for k in sorted(set(circuit_doc) - known):
            problems.append(f"circuit.{k}: unknown parameter")
        values = {}
        for k in sorted(set(circuit_doc) & known):
            v = circuit_doc[k]
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                problems.append(f"circuit.{k}: must be a number")
            else:
                values[k] = float(v)
        probe = CircuitParams.__new__(CircuitParams)
        for f in dataclasses.fields(CircuitParams):
            object.__setattr__(probe, f.name, values.get(f.name, f.default))
        bad = probe.problems()
        problems.extend(f"circuit.{msg}" for msg in bad)
        if not bad and not any(p.startswith("circuit.") for p in problems):
            circuit = CircuitParams(**values)

    output_dir = document.get("output_dir", "out")
    if not isinstance(output_dir, str) or not output_dir:
        problems.append("output_dir: must be a non-empty string")

    defaults = DEFAULTS[scenario]
    allowed = {"scenario", "circuit", "output_dir"} | set(defaults)
    for k in sorted(set(document) - allowed):
        problems.append(f"{k}: not a recognised key for scenario {scenario}")

    options: dict[str, Any] = {}
    for key, default in defaults.items():
        value = document.get(key, default)
        if key in _GRID_KEYS:
            grid = _expand_grid(value, key, problems)
            if grid is None:
                continue
            if not grid:
                problems.append(f"{key}: grid must be non-empty")
                continue
            if any(not math.isfinite(x) for x in grid):
                problems.append(f"{key}: entries must be finite")
                continue
            if key not in ("xi0",) and grid != sorted(grid):
                problems.append(f"{key}: grid must be sorted ascending")
            options[key] = grid
        else:
            options[key] = value

    _check_ranges(scenario, options, problems)
    if problems or circuit is None:
        raise ConfigError(problems or ["circuit: invalid"])
    return ScenarioConfig(scenario, circuit, output_dir, options)


def _check_ranges(scenario, o, problems):
    for u in o.get("u0", []) if isinstance(o.get("u0"), list) else []:
        if not -1.0 < u < 1.0:
            problems.append(f"u0: value {u} violates -1 < u0 < 1")
        elif u <= 0 and scenario != "separation":
            problems.append(f"u0: value {u} must be > 0 for {scenario}")
    for a in o.get("alpha", []) if isinstance(o.get("alpha"), list) else []:
        if a < 0:
            problems.append(f"alpha: value {a} must be >= 0")
    for key in ("dtau", "ode_dtau", "dxi", "length", "launch_distance"):
        if key in o:
            v = o[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0:
                problems.append(f"{key}: must be a number > 0")
    if "gamma" in o and not (isinstance(o["gamma"], (int, float)) and abs(o["gamma"]) < 1):
        problems.append("gamma: must satisfy |gamma| < 1")
    if "boundary" in o and o["boundary"] not in pde.BOUNDARIES:
        problems.append(f"boundary: must be one of {pde.BOUNDARIES}")
    if "write_trajectories" in o and not isinstance(o["write_trajectories"], bool):
        problems.append("write_trajectories: must be true or false")
    if "n_max" in o and not (isinstance(o["n_max"], int) and o["n_max"] >= 1):
        problems.append("n_max: must be an integer >= 1")
    if "frequencies_hz" in o:
        if any(f <= 0 for f in o["frequencies_hz"]):
            problems.append("frequencies_hz: entries must be > 0")
    if scenario in ("separation", "pde-vs-ode") and "alpha" in o and len(o["alpha"]) != 1:
        problems.append("alpha: this scenario takes a single damping value")
    if scenario == "decay-curve" and "alpha" in o and len(o["alpha"]) != 1:
        problems.append("alpha: this scenario takes a single damping value")
    if scenario == "separation" and "u0" in o and len(o["u0"]) != 1:
        problems.append("u0: this scenario takes a single velocity")


# --------------------------------------------------------------------------- output


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path: Path, header: list[str], rows) -> Path:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def write_json(path: Path, obj) -> Path:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")
    return path


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _pool_map(fn: Callable, items: list, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


# --------------------------------------------------------------------------- scenarios


def _params_dump(cfg, d, out, threads):
    return [write_json(out / "derived_params.json", d.to_dict())]


def _ode_delay_point(args):
    u0, alpha, eta, dtau = args
    try:
        m = ode.measure_delay(
            u0, ode.PerturbationSpec(alpha=alpha, eta=eta), ode.PerturbationSpec(alpha=alpha, eta=-eta), dtau=dtau
        )
        return m.tau_d, m.regime_ok
    except NoCrossingError:
        return math.inf, False


def _delay_sweep(cfg, d, out, threads):
    o = cfg.options
    eta = d.eta_c
    points = [(u0, a, eta, o["dtau"]) for a in o["alpha"] for u0 in o["u0"]]
    results = _pool_map(_ode_delay_point, points, threads)
    long_rows = []
    by_alpha: dict[float, dict[float, float]] = {}
    for (u0, a, _, _), (tau_d, ok) in zip(points, results):
        long_rows.append((u0, a, eta, tau_d, tau_d / d.omega_p * 1e12, ok))
        by_alpha.setdefault(a, {})[u0] = tau_d
    files = [write_csv(out / "delay_sweep.csv", ["u0", "alpha", "eta", "tau_delay", "T_delay_ps", "regime_ok"], long_rows)]

    header = ["u0", "T_analytic_ps"] + [f"T_ode_ps_alpha_{_fmt(a)}" for a in o["alpha"]]
    wide = []
    for u0 in o["u0"]:
        row = [u0, analytics.time_delay_qubit(u0, d).T_d * 1e12]
        row += [by_alpha[a][u0] / d.omega_p * 1e12 for a in o["alpha"]]
        wide.append(row)
    files.append(write_csv(out / "delay_curves.csv", header, wide))
    if o["write_trajectories"]:
        for u0, a, _, dtau in points:
            for label, e in (("up", eta), ("down", -eta)):
                tr = ode.integrate_to(ode.KinkState(u0, -ode.LAUNCH_DISTANCE), ode.PerturbationSpec(alpha=a, eta=e), ode.LAUNCH_DISTANCE, dtau)
                name = f"ode_trajectory_u0_{_fmt(u0)}_alpha_{_fmt(a)}_{label}.csv"
                files.append(write_csv(out / name, ["tau", "u", "Xi"], zip(tr.tau, tr.u, tr.Xi)))
    return files


def _separation_run(args):
    circuit_alpha, o, xi0 = args
    grid = pde.Grid.spanning(0.0, o["length"], o["dxi"])
    state = pde.init_kink(grid, KinkSpec(o["u0"][0], xi0), o["boundary"])
    bias = pde.BiasProfile.step(o["xi_b"], o["gamma"], circuit_alpha)
    times = o["snapshot_times"]
    return pde.run(
        state, grid, bias, None, o["dtau"], max(times), snapshot_times=times, boundary=o["boundary"], record_every=10
    )


def separation_metrics(trajs: list, taus) -> list[dict]:
    """Centroid gap and kink width between the first two runs at each time.

    The width is sqrt(1 - u^2) with u taken from the centroid record of the
    leading kink (difference over +-1 time unit, one-sided at the ends).
    """
    a, b = trajs[0], trajs[1]
    out = []
    for t in taus:
        ca, cb = _interp(a, t), _interp(b, t)
        lead = a if ca >= cb else b
        lo, hi = max(t - 1.0, lead.taus[0]), min(t + 1.0, lead.taus[-1])
        u = (_interp(lead, hi) - _interp(lead, lo)) / (hi - lo)
        u = min(abs(u), 1.0 - 1e-12) if math.isfinite(u) else math.nan
        width = math.sqrt(1.0 - u * u) if math.isfinite(u) else math.nan
        gap = abs(ca - cb)
        out.append(
            {
                "tau": float(t),
                "centroid_a": ca,
                "centroid_b": cb,
                "gap": gap,
                "velocity": u,
                "width": width,
                "separated": bool(gap > width),
                "winding_a": a.snapshot_at(t).winding,
                "winding_b": b.snapshot_at(t).winding,
            }
        )
    return out


def _interp(traj, t):
    taus = traj.taus
    t = min(max(t, taus[0]), taus[-1])
    return float(np.interp(t, taus, traj.centroids))


def _separation(cfg, d, out, threads):
    o = cfg.options
    alpha = o["alpha"][0]
    runs = _pool_map(_separation_run, [(alpha, o, x) for x in o["xi0"]], threads)
    files = []
    for xi0, tr in zip(o["xi0"], runs):
        tag = _fmt(xi0)
        rows = []
        for snap in tr.snapshots:
            rows.extend(zip([snap.tau] * len(tr.xi), tr.xi, snap.voltage))
        files.append(write_csv(out / f"snapshots_xi0_{tag}.csv", ["tau", "xi", "voltage_dimensionless"], rows))
        files.append(write_csv(out / f"centroid_xi0_{tag}.csv", ["tau", "centroid"], zip(tr.taus, tr.centroids)))
        meta = {
            "xi0": xi0,
            "u0": o["u0"][0],
            "alpha": alpha,
            "gamma": o["gamma"],
            "xi_b": o["xi_b"],
            "dxi": o["dxi"],
            "dtau": o["dtau"],
            "boundary": o["boundary"],
            "snapshots": [{"tau": s.tau, "winding": s.winding, "energy": s.energy} for s in tr.snapshots],
        }
        files.append(write_json(out / f"trajectory_xi0_{tag}.json", meta))
    if len(runs) >= 2:
        metrics = {
            "per_time": separation_metrics(runs, o["snapshot_times"]),
            "condition": dataclasses.asdict(
                analytics.separation_condition(o["gamma"], alpha, o["u0"][0], d.eta_c)
            ),
            "steady_state_velocity": ode.steady_state_velocity(o["gamma"], alpha) if alpha > 0 else None,
        }
        files.append(write_json(out / "separation_metrics.json", metrics))
    return files


def _pde_delay_point(args):
    u0, alpha, eta, o = args
    L = o["launch_distance"]
    grid = pde.Grid.spanning(-2 * L, 2 * L, o["dxi"], coupling_at=0.0)
    bias = pde.BiasProfile.uniform(0.0, alpha)
    times = []
    for sign in (1, -1):
        state = pde.init_kink(grid, KinkSpec(u0, -L), o["boundary"])
        tr = pde.run(
            state,
            grid,
            bias,
            pde.CouplingTerm(sign * eta, grid.coupling_index),
            o["dtau"],
            tau_end=(2 * L + 2.0) / u0,
            boundary=o["boundary"],
            record_every=5,
        )
        times.append(pde.arrival_time(tr, L))
    return times[1] - times[0]


def _pde_vs_ode(cfg, d, out, threads):
    o = cfg.options
    alpha = o["alpha"][0]
    eta = d.eta_c
    pde_vals = _pool_map(_pde_delay_point, [(u0, alpha, eta, o) for u0 in o["u0"]], threads)
    rows = []
    for u0, t_pde in zip(o["u0"], pde_vals):
        m = ode.measure_delay(
            u0,
            ode.PerturbationSpec(alpha=alpha, eta=eta),
            ode.PerturbationSpec(alpha=alpha, eta=-eta),
            dtau=o["ode_dtau"],
            xi_launch=-o["launch_distance"],
            xi_probe=o["launch_distance"],
        )
        t_an = analytics.time_delay_qubit(u0, d).tau_d
        rows.append((u0, alpha, eta, t_pde, m.tau_d, t_an, abs(t_pde / m.tau_d - 1.0)))
    header = ["u0", "alpha", "eta", "tau_delay_pde", "tau_delay_ode", "tau_delay_analytic", "rel_diff_pde_ode"]
    return [write_csv(out / "pde_vs_ode.csv", header, rows)]


def _decay_curve(cfg, d, out, threads):
    o = cfg.options
    alpha = o["alpha"][0]
    spec = kgtl.DecaySpec.from_params(d, alpha=alpha)
    lossless = kgtl.DecaySpec.from_params(d, alpha=0.0, L_in=0.0)
    rows = []
    for f in o["frequencies_hz"]:
        w = 2 * math.pi * f
        if not w < d.omega_p:
            raise DomainError(f"frequency {f} Hz is not below the gap")
        try:
            diss = kgtl.decay_rate_dissipationless_approx(w, lossless)
        except FluxDelayError:
            diss = math.nan
        rows.append((f, kgtl.decay_rate(w, spec), kgtl.decay_rate_underdamped_approx(w, spec), diss))
    header = ["omega_over_2pi_Hz", "rate_exact_Hz", "rate_underdamped_Hz", "rate_dissipationless_Hz"]
    return [write_csv(out / "decay_curve.csv", header, rows)]


def _transitions(cfg, d, out, threads):
    o = cfg.options
    n_max = o["n_max"]
    header = ["u0", "P_qubit", "weak_coupling_ok"]
    header += [f"P_up_from_{n}" for n in range(n_max + 1)]
    header += [f"P_down_from_{n}" for n in range(1, n_max + 1)]
    rows = []
    for u0 in o["u0"]:
        row = [u0, analytics.transition_probability_qubit(u0, d), analytics.weak_coupling_ok(u0, d)]
        row += [analytics.transition_probability_multilevel(n, "up", u0, d) for n in range(n_max + 1)]
        row += [analytics.transition_probability_multilevel(n, "down", u0, d) for n in range(1, n_max + 1)]
        rows.append(row)
    return [write_csv(out / "transitions.csv", header, rows)]


_DISPATCH = {
    "params-dump": _params_dump,
    "delay-sweep": _delay_sweep,
    "separation": _separation,
    "pde-vs-ode": _pde_vs_ode,
    "decay-curve": _decay_curve,
    "transitions": _transitions,
}


def run_scenario(config: ScenarioConfig, out_dir: str | os.PathLike | None = None, threads: int = 1) -> RunManifest:
    """Run one scenario and write its data files plus ``manifest.json``.

    Data files are byte-identical for identical configurations, whatever the
    number of worker processes.
    """
    start = time.perf_counter()
    out = Path(out_dir if out_dir is not None else config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        d = derive(config.circuit)
        files = _DISPATCH[config.scenario](config, d, out, threads)
    except FluxDelayError as exc:
        raise type(exc)(f"scenario {config.scenario}: {exc}") from exc
    manifest = RunManifest(
        config=config.to_dict(),
        derived=d.to_dict(),
        version=__version__,
        duration_s=time.perf_counter() - start,
        outputs=[{"path": p.name, "sha256": _digest(p)} for p in files],
        thresholds={
            "much_greater_factor": analytics.MUCH_GREATER,
            "detector_resolution_s": analytics.DETECTOR_RESOLUTION,
        },
    )
    write_json(out / "manifest.json", manifest.to_dict())
    return manifest
