"""Command-line front end: scenario files in, deterministic reports out.

Commands
    solve    solve the scenario's method once, write report.json
    sweep    sweep the 3-impulse family over omega2, write sweep.csv + report.json
    compare  run every applicable method, write compare.csv
    sample   write trajectory.csv (x_km, y_km, arc_index) for plotting

Scenario files are JSON with angles in degrees and lengths in km; unknown
keys are rejected. All outputs are byte-deterministic for fixed inputs.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .chains import (
    AdjustableSet,
    ImpulseSchedule,
    ManeuverScenario,
    TransferChain,
    impulse_schedule,
    solve_chain,
    two_impulse_chains,
    two_impulse_perigee,
)
from .classical import bi_elliptic, hohmann, single_impulse
from .conics import (
    EARTH,
    TWO_PI,
    Gravity,
    OrbitPosition,
    PlanarOrbit,
    radius_at,
    state_from_elements,
    wrap_angle,
)
from .errors import ArcTransferError, ParseError, SolveError
from .lambert import (
    LambertProblem,
    default_theta_grid,
    default_tof_grid,
    lambert_scenario_a,
    lambert_scenario_b,
    lambert_solve,
)
from .optimize import cost_report, sweep_omega2, sweep_to_csv
from .variational import DecayProfile, history_to_csv, propagate_decay

METHODS = (
    "sbgm",
    "lambert-a",
    "lambert-b",
    "hohmann",
    "bielliptic",
    "single",
    "two-impulse-perigee",
    "variational",
)

_TOP_KEYS = {"mu_km3s2", "initial", "final", "impulses", "adjustables", "method", "options"}
_ORBIT_KEYS_DEP = {"a_km", "e", "omega_deg", "theta_dep_deg"}
_ORBIT_KEYS_ARR = {"a_km", "e", "omega_deg", "theta_arr_deg"}
_OPTION_KEYS = {
    "grid_omega2_deg",
    "tof_points",
    "theta_points",
    "vary",
    "r_mid_km",
    "alpha",
    "span_rev",
    "step_deg",
}

_SAMPLE_STEP_RAD = math.radians(0.1)


@dataclass(frozen=True)
class ScenarioSpec:
    """Validated scenario file contents."""

    grav: Gravity
    initial: PlanarOrbit
    final: PlanarOrbit
    theta_dep: float
    theta_arr: float
    impulses: int
    adjustables: dict
    method: str
    options: dict


def _require_number(value, label: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{label} must be a number, got {value!r}")
    return float(value)


def _parse_orbit(obj, keys: set[str], label: str) -> tuple[PlanarOrbit, float]:
    if not isinstance(obj, dict):
        raise ParseError(f"{label} must be an object")
    unknown = set(obj) - keys
    if unknown:
        raise ParseError(f"unknown keys in {label}: {sorted(unknown)}")
    missing = keys - set(obj)
    if missing:
        raise ParseError(f"missing keys in {label}: {sorted(missing)}")
    a = _require_number(obj["a_km"], f"{label}.a_km")
    e = _require_number(obj["e"], f"{label}.e")
    omega = math.radians(_require_number(obj["omega_deg"], f"{label}.omega_deg"))
    theta_key = "theta_dep_deg" if "theta_dep_deg" in keys else "theta_arr_deg"
    theta = math.radians(_require_number(obj[theta_key], f"{label}.{theta_key}"))
    try:
        orbit = PlanarOrbit(a, e, omega)
    except ValueError as exc:
        raise ParseError(f"invalid {label}: {exc}") from exc
    return orbit, wrap_angle(theta)


def load_scenario(path: str | Path) -> ScenarioSpec:
    """Parse and validate a scenario file.

    Raises:
        ParseError: Unreadable file, bad JSON, or schema violation.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read scenario file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"scenario file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("scenario file must contain a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ParseError(f"unknown top-level keys: {sorted(unknown)}")
    for key in ("initial", "final", "method"):
        if key not in data:
            raise ParseError(f"missing required key {key!r}")
    method = data["method"]
    if method not in METHODS:
        raise ParseError(f"method must be one of {METHODS}, got {method!r}")
    mu = data.get("mu_km3s2", EARTH.mu)
    grav = Gravity(_require_number(mu, "mu_km3s2"))
    initial, theta_dep = _parse_orbit(data["initial"], _ORBIT_KEYS_DEP, "initial")
    final, theta_arr = _parse_orbit(data["final"], _ORBIT_KEYS_ARR, "final")
    impulses = data.get("impulses", 2)
    if isinstance(impulses, bool) or not isinstance(impulses, int) or impulses < 1:
        raise ParseError(f"impulses must be a positive integer, got {impulses!r}")
    adjustables = data.get("adjustables", {})
    if not isinstance(adjustables, dict):
        raise ParseError("adjustables must be an object")
    for pid, value in adjustables.items():
        if value != "sweep":
            _require_number(value, f"adjustables.{pid}")
    options = data.get("options", {})
    if not isinstance(options, dict):
        raise ParseError("options must be an object")
    unknown = set(options) - _OPTION_KEYS
    if unknown:
        raise ParseError(f"unknown option keys: {sorted(unknown)}")
    if "vary" in options and options["vary"] not in ("arrival", "departure", "both"):
        raise ParseError("options.vary must be arrival, departure or both")
    return ScenarioSpec(
        grav=grav,
        initial=initial,
        final=final,
        theta_dep=theta_dep,
        theta_arr=theta_arr,
        impulses=impulses,
        adjustables=dict(adjustables),
        method=method,
        options=dict(options),
    )


def _maneuver_scenario(spec: ScenarioSpec, numeric_adjustables: bool) -> ManeuverScenario:
    assignments = []
    for pid, value in sorted(spec.adjustables.items()):
        if value == "sweep":
            if numeric_adjustables:
                raise ParseError(
                    f"adjustable {pid!r} is marked 'sweep'; solve needs a number"
                )
            value = 0.0
        else:
            value = math.radians(float(value))
        assignments.append((pid, value))
    try:
        return ManeuverScenario(
            initial=spec.initial,
            final=spec.final,
            theta_first=spec.theta_dep,
            theta_last=spec.theta_arr,
            n_impulses=spec.impulses,
            adjustables=AdjustableSet(tuple(assignments)),
            grav=spec.grav,
        )
    except ArcTransferError as exc:
        raise ParseError(str(exc)) from exc
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _fmt(x: float) -> str:
    return format(float(x), ".6g")


def _orbit_json(orbit: PlanarOrbit) -> dict:
    return {"a_km": orbit.a, "e": orbit.e, "omega_rad": orbit.omega}


def _schedule_json(schedule: ImpulseSchedule) -> dict:
    report = cost_report(schedule)
    return {
        "impulses": [
            {
                "theta_rad": b.theta,
                "radius_km": b.radius,
                "dv_km_s": b.dv,
                "tangential": b.tangential,
            }
            for b in schedule.impulses
        ],
        "arc_times_s": list(schedule.arc_times),
        "total_time_s": schedule.total_time,
        "jc_km_s": report.j_c,
        "jm_km_s": report.j_m,
    }


def _chain_json(chain: TransferChain) -> dict:
    out = {
        "orbits": [_orbit_json(o) for o in chain.orbits],
        "junctions_rad": list(chain.junctions),
        "max_scaled_residual": chain.max_scaled_residual(),
    }
    if chain.diagnostics is not None:
        out["diagnostics"] = {
            "iterations": chain.diagnostics.iterations,
            "residual_norm": chain.diagnostics.residual_norm,
            "relaxations": chain.diagnostics.relaxations,
        }
    return out


def _scenario_echo(spec: ScenarioSpec) -> dict:
    return {
        "mu_km3s2": spec.grav.mu,
        "initial": {
            "a_km": spec.initial.a,
            "e": spec.initial.e,
            "omega_deg": math.degrees(spec.initial.omega),
            "theta_dep_deg": math.degrees(spec.theta_dep),
        },
        "final": {
            "a_km": spec.final.a,
            "e": spec.final.e,
            "omega_deg": math.degrees(spec.final.omega),
            "theta_arr_deg": math.degrees(spec.theta_arr),
        },
        "impulses": spec.impulses,
        "adjustables": spec.adjustables,
        "method": spec.method,
        "options": spec.options,
    }


def _tof_grid(spec: ScenarioSpec):
    points = int(spec.options.get("tof_points", 500))
    return default_tof_grid(spec.initial, spec.grav, points)


def _theta_grid(spec: ScenarioSpec):
    points = int(spec.options.get("theta_points", 720))
    return default_theta_grid(points)


def _chain_for_method(spec: ScenarioSpec) -> TransferChain:
    """Solve the chain-producing methods."""
    if spec.method == "sbgm":
        scenario = _maneuver_scenario(spec, numeric_adjustables=True)
        return solve_chain(scenario)
    if spec.method == "hohmann":
        if not (spec.initial.is_circular() and spec.final.is_circular()):
            raise ParseError("hohmann needs circular initial and final orbits")
        return hohmann(spec.initial.a, spec.final.a, spec.grav)
    if spec.method == "bielliptic":
        if not (spec.initial.is_circular() and spec.final.is_circular()):
            raise ParseError("bielliptic needs circular initial and final orbits")
        if "r_mid_km" not in spec.options:
            raise ParseError("bielliptic needs options.r_mid_km")
        return bi_elliptic(
            spec.initial.a,
            _require_number(spec.options["r_mid_km"], "options.r_mid_km"),
            spec.final.a,
            spec.grav,
        )
    if spec.method == "two-impulse-perigee":
        return two_impulse_perigee(spec.initial, spec.final, spec.grav)
    raise ParseError(f"method {spec.method!r} does not produce a single chain")


def _solve_report(spec: ScenarioSpec) -> tuple[dict, dict[str, str]]:
    """report dict plus extra {filename: text} outputs for `solve`."""
    report: dict = {"scenario": _scenario_echo(spec), "command": "solve"}
    extra: dict[str, str] = {}
    if spec.method in ("sbgm", "hohmann", "bielliptic", "two-impulse-perigee"):
        chain = _chain_for_method(spec)
        schedule = impulse_schedule(chain)
        report["chain"] = _chain_json(chain)
        report["schedule"] = _schedule_json(schedule)
    elif spec.method == "single":
        schedules = single_impulse(
            spec.initial, spec.final, spec.grav, theta_depart=spec.theta_dep
        )
        report["solutions"] = [_schedule_json(s) for s in schedules]
    elif spec.method in ("lambert-a", "lambert-b"):
        scenario = _maneuver_scenario(spec, numeric_adjustables=False)
        if spec.method == "lambert-a":
            optima = lambert_scenario_a(scenario, _tof_grid(spec))
        else:
            optima = lambert_scenario_b(
                scenario,
                _tof_grid(spec),
                _theta_grid(spec),
                vary=spec.options.get("vary", "arrival"),
            )
        report["lambert"] = {
            "best_ce": _lambert_candidate_json(optima.best_ce),
            "best_mi": _lambert_candidate_json(optima.best_mi),
            "n_evaluated": optima.n_evaluated,
            "n_valid": optima.n_valid,
        }
    elif spec.method == "variational":
        if "alpha" not in spec.options:
            raise ParseError("variational needs options.alpha")
        profile = DecayProfile(
            e0=spec.initial.e,
            alpha=_require_number(spec.options["alpha"], "options.alpha"),
        )
        span = TWO_PI * _require_number(
            spec.options.get("span_rev", 10.0), "options.span_rev"
        )
        step = math.radians(
            _require_number(spec.options.get("step_deg", math.degrees(0.001)), "options.step_deg")
        )
        history = propagate_decay(spec.initial, profile, span, step)
        report["decay"] = {
            "samples": len(history),
            "stopped_early": history.stopped_early,
            "final": {
                "theta_rad": float(history.theta[-1]),
                "a_km": float(history.a[-1]),
                "e": float(history.e[-1]),
                "omega_rad": float(history.omega[-1]),
            },
        }
        extra["decay.csv"] = history_to_csv(history)
    else:
        raise ParseError(f"unsupported method {spec.method!r}")
    return report, extra


def _lambert_candidate_json(candidate) -> dict:
    return {
        "tof_s": candidate.tof,
        "theta_depart_rad": candidate.theta_depart,
        "theta_arrive_rad": candidate.theta_arrive,
        "jc_km_s": candidate.j_c,
        "jm_km_s": candidate.j_m,
        "schedule": _schedule_json(candidate.schedule),
    }


def _sweep_outputs(spec: ScenarioSpec) -> dict[str, str]:
    if spec.method != "sbgm":
        raise ParseError("sweep requires method 'sbgm'")
    if spec.impulses != 3:
        raise ParseError("sweep requires a 3-impulse scenario")
    scenario = _maneuver_scenario(spec, numeric_adjustables=False)
    step = float(spec.options.get("grid_omega2_deg", 0.25))
    result = sweep_omega2(scenario, grid_step_deg=step)
    report: dict = {
        "scenario": _scenario_echo(spec),
        "command": "sweep",
        "grid_step_deg": step,
        "convergence_rate": result.convergence_rate,
        "two_impulse_points": [
            {
                "omega2_deg": p.omega2_deg,
                "vanished_impulse": p.vanished_impulse,
                "jc_km_s": p.report.j_c,
                "jm_km_s": p.report.j_m,
                "time_s": p.report.total_time,
                "chain": _chain_json(p.chain),
            }
            for p in result.two_impulse_points
        ],
    }
    for label, opt in (("argmin_ce", result.argmin_ce), ("argmin_mi", result.argmin_mi)):
        report[label] = (
            None
            if opt is None
            else {
                "omega2_deg": opt.omega2_deg,
                "jc_km_s": opt.report.j_c,
                "jm_km_s": opt.report.j_m,
                "time_s": opt.report.total_time,
                "chain": _chain_json(opt.chain),
            }
        )
    return {"sweep.csv": sweep_to_csv(result), "report.json": _dump_json(report)}


def _compare_rows(spec: ScenarioSpec) -> list[tuple[str, str, float, float, float, str]]:
    """(method, objective, jc, jm, time, smooth) rows for every applicable method."""
    rows = []
    scenario = _maneuver_scenario(spec, numeric_adjustables=False)

    try:
        singles = single_impulse(
            spec.initial, spec.final, spec.grav, theta_depart=spec.theta_dep
        )
        for k, schedule in enumerate(singles):
            r = cost_report(schedule)
            rows.append((f"single[{k}]", "-", r.j_c, r.j_m, r.total_time, "no"))
    except ArcTransferError:
        pass

    try:
        optima = lambert_scenario_a(scenario, _tof_grid(spec))
        rows.append(
            ("lambert-a", "ce", optima.best_ce.j_c, optima.best_ce.j_m, optima.best_ce.tof, "no")
        )
        rows.append(
            ("lambert-a", "mi", optima.best_mi.j_c, optima.best_mi.j_m, optima.best_mi.tof, "no")
        )
    except ArcTransferError:
        pass

    try:
        optima = lambert_scenario_b(
            scenario,
            _tof_grid(spec),
            _theta_grid(spec),
            vary=spec.options.get("vary", "arrival"),
        )
        rows.append(
            ("lambert-b", "ce", optima.best_ce.j_c, optima.best_ce.j_m, optima.best_ce.tof, "no")
        )
        rows.append(
            ("lambert-b", "mi", optima.best_mi.j_c, optima.best_mi.j_m, optima.best_mi.tof, "no")
        )
    except ArcTransferError:
        pass

    try:
        chain = two_impulse_perigee(spec.initial, spec.final, spec.grav)
        r = cost_report(impulse_schedule(chain))
        rows.append(("two-impulse-perigee", "-", r.j_c, r.j_m, r.total_time, "yes"))
    except ArcTransferError:
        pass

    for k, chain in enumerate(two_impulse_chains(scenario)):
        r = cost_report(impulse_schedule(chain))
        rows.append((f"sbgm-2imp[{k}]", "-", r.j_c, r.j_m, r.total_time, "yes"))

    if spec.impulses == 3 and "omega2" in spec.adjustables:
        step = float(spec.options.get("grid_omega2_deg", 0.25))
        sweep = sweep_omega2(scenario, grid_step_deg=step)
        for label, opt in (("ce", sweep.argmin_ce), ("mi", sweep.argmin_mi)):
            if opt is not None:
                rows.append(
                    (
                        "sbgm-3imp",
                        label,
                        opt.report.j_c,
                        opt.report.j_m,
                        opt.report.total_time,
                        "yes",
                    )
                )

    if spec.initial.is_circular() and spec.final.is_circular():
        try:
            chain = hohmann(spec.initial.a, spec.final.a, spec.grav)
            r = cost_report(impulse_schedule(chain))
            rows.append(("hohmann", "-", r.j_c, r.j_m, r.total_time, "yes"))
        except ArcTransferError:
            pass
        if "r_mid_km" in spec.options:
            try:
                chain = bi_elliptic(
                    spec.initial.a,
                    float(spec.options["r_mid_km"]),
                    spec.final.a,
                    spec.grav,
                )
                r = cost_report(impulse_schedule(chain))
                rows.append(("bielliptic", "-", r.j_c, r.j_m, r.total_time, "yes"))
            except ArcTransferError:
                pass
    return rows


def _compare_csv(rows) -> str:
    lines = ["method,objective,jc_km_s,jm_km_s,time_s,smooth"]
    for method, objective, jc, jm, t, smooth in rows:
        lines.append(f"{method},{objective},{_fmt(jc)},{_fmt(jm)},{_fmt(t)},{smooth}")
    return "\n".join(lines) + "\n"


def _arc_points(orbit: PlanarOrbit, theta_from: float, theta_to: float, arc_index: int):
    """(x, y, arc_index) samples along an orbit between two polar angles."""
    span = wrap_angle(theta_to - theta_from)
    if span == 0.0:
        span = TWO_PI
    count = max(2, int(math.ceil(span / _SAMPLE_STEP_RAD)) + 1)
    rows = []
    for k in range(count):
        theta = theta_from + span * k / (count - 1)
        r = radius_at(orbit, theta)
        rows.append((r * math.cos(theta), r * math.sin(theta), arc_index))
    return rows


def _trajectory_csv(spec: ScenarioSpec) -> str:
    rows: list[tuple[float, float, int]] = []
    rows += _arc_points(spec.initial, 0.0, TWO_PI, 0)
    if spec.method in ("sbgm", "hohmann", "bielliptic", "two-impulse-perigee"):
        chain = _chain_for_method(spec)
        for k in range(chain.n_impulses - 1):
            rows += _arc_points(
                chain.orbits[k + 1], chain.junctions[k], chain.junctions[k + 1], k + 1
            )
        last_arc = chain.n_impulses
    elif spec.method in ("lambert-a", "lambert-b"):
        scenario = _maneuver_scenario(spec, numeric_adjustables=False)
        if spec.method == "lambert-a":
            optima = lambert_scenario_a(scenario, _tof_grid(spec))
        else:
            optima = lambert_scenario_b(
                scenario,
                _tof_grid(spec),
                _theta_grid(spec),
                vary=spec.options.get("vary", "arrival"),
            )
        best = optima.best_ce
        dep_state = state_from_elements(
            OrbitPosition(spec.initial, best.theta_depart), spec.grav
        )
        arr_state = state_from_elements(
            OrbitPosition(spec.final, best.theta_arrive), spec.grav
        )
        solution = lambert_solve(
            LambertProblem(dep_state.position, arr_state.position, best.tof, spec.grav)
        )
        rows += _arc_points(
            solution.transfer_orbit, best.theta_depart, best.theta_arrive, 1
        )
        last_arc = 2
    elif spec.method == "single":
        last_arc = 1
    else:
        raise ParseError(f"sample does not support method {spec.method!r}")
    rows += _arc_points(spec.final, 0.0, TWO_PI, last_arc)
    lines = ["x_km,y_km,arc_index"]
    for x, y, idx in rows:
        lines.append(f"{_fmt(x)},{_fmt(y)},{idx}")
    return "\n".join(lines) + "\n"


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def run(
    scenario_path: str | Path,
    command: str,
    output_dir: str | Path,
    option_overrides: dict | None = None,
) -> int:
    """Execute one CLI command; returns the process exit status.

    Output files are only written when the whole command succeeded, so a
    failing run leaves no partial outputs. Errors print a JSON record to
    stderr; exit status 2 flags scenario problems, 3 solver failures.
    """
    try:
        spec = load_scenario(scenario_path)
        if option_overrides:
            spec = dataclasses.replace(
                spec, options={**spec.options, **option_overrides}
            )
        outputs: dict[str, str] = {}
        if command == "solve":
            report, extra = _solve_report(spec)
            outputs["report.json"] = _dump_json(report)
            outputs.update(extra)
        elif command == "sweep":
            outputs.update(_sweep_outputs(spec))
        elif command == "compare":
            rows = _compare_rows(spec)
            outputs["compare.csv"] = _compare_csv(rows)
        elif command == "sample":
            if spec.method == "variational":
                report, extra = _solve_report(spec)
                outputs.update(extra)
            else:
                outputs["trajectory.csv"] = _trajectory_csv(spec)
        else:
            raise ParseError(f"unknown command {command!r}")
    except ParseError as exc:
        _emit_error("parse", exc)
        return 2
    except ArcTransferError as exc:
        _emit_error("solve", SolveError(str(exc)))
        return 3

    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in outputs.items():
        (out / name).write_text(text)
    return 0


def _emit_error(kind: str, exc: Exception) -> None:
    record = {"error": kind, "type": type(exc).__name__, "message": str(exc)}
    print(json.dumps(record), file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="arctransfer",
        description="Design smooth multi-impulse coplanar orbit transfers.",
    )
    parser.add_argument("command", choices=("solve", "sweep", "compare", "sample"))
    parser.add_argument("--scenario", required=True, help="scenario JSON file")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument(
        "--grid-omega2-deg", type=float, default=None, help="sweep grid step (deg)"
    )
    parser.add_argument("--tof-points", type=int, default=None)
    parser.add_argument("--theta-points", type=int, default=None)
    args = parser.parse_args(argv)

    overrides = {}
    if args.grid_omega2_deg is not None:
        overrides["grid_omega2_deg"] = args.grid_omega2_deg
    if args.tof_points is not None:
        overrides["tof_points"] = args.tof_points
    if args.theta_points is not None:
        overrides["theta_points"] = args.theta_points

    return run(args.scenario, args.command, args.out, overrides or None)


if __name__ == "__main__":
    sys.exit(main())
