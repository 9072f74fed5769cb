"""Fixed-time two-point transfer arcs (Lambert problem) and grid optimizers.

Universal-variable formulation, zero revolution, prograde only. The time
of flight is monotone increasing in the universal parameter z on the
single-revolution branch, so a plain bisection is robust for any transfer
angle; the search is vectorized over whole time grids for the optimizers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chains import Impulse, ImpulseSchedule
from .conics import (
    EARTH,
    TWO_PI,
    Gravity,
    OrbitPosition,
    PlanarOrbit,
    PlanarState,
    elements_from_state,
    radius_at,
    state_from_elements,
    wrap_angle,
)
from .errors import (
    AllGridPointsFailed,
    DegenerateGeometry,
    DegenerateOrbit,
    HyperbolicOrParabolic,
    NoConvergence,
)

_Z_MAX = 4.0 * math.pi**2 * (1.0 - 1e-9)  # just under the full-revolution pole
_Z_MIN = -64.0 * math.pi**2
_BISECT_STEPS = 110


@dataclass(frozen=True)
class LambertProblem:
    """Two planar position vectors to connect in a fixed time of flight."""

    r_start: np.ndarray
    r_end: np.ndarray
    tof: float
    grav: Gravity = EARTH

    def __post_init__(self) -> None:
        start = np.asarray(self.r_start, dtype=float).reshape(2)
        end = np.asarray(self.r_end, dtype=float).reshape(2)
        object.__setattr__(self, "r_start", start)
        object.__setattr__(self, "r_end", end)
        if not self.tof > 0.0:
            raise ValueError(f"time of flight must be positive, got {self.tof}")
        if not (np.linalg.norm(start) > 0.0 and np.linalg.norm(end) > 0.0):
            raise ValueError("position vectors must be nonzero")


@dataclass(frozen=True, eq=False)
class LambertSolution:
    """Terminal velocities plus the connecting elliptic arc."""

    v_start: np.ndarray
    v_end: np.ndarray
    transfer_orbit: PlanarOrbit


def _stumpff_c(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z > 1e-6
    neg = z < -1e-6
    mid = ~(pos | neg)
    if pos.any():
        out[pos] = (1.0 - np.cos(np.sqrt(z[pos]))) / z[pos]
    if neg.any():
        out[neg] = (np.cosh(np.sqrt(-z[neg])) - 1.0) / (-z[neg])
    if mid.any():
        zm = z[mid]
        out[mid] = 0.5 - zm / 24.0 + zm * zm / 720.0
    return out


def _stumpff_s(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z > 1e-6
    neg = z < -1e-6
    mid = ~(pos | neg)
    if pos.any():
        s = np.sqrt(z[pos])
        out[pos] = (s - np.sin(s)) / s**3
    if neg.any():
        s = np.sqrt(-z[neg])
        out[neg] = (np.sinh(s) - s) / s**3
    if mid.any():
        zm = z[mid]
        out[mid] = 1.0 / 6.0 - zm / 120.0 + zm * zm / 5040.0
    return out


class _Geometry:
    """Fixed endpoint geometry with a vectorized time-of-flight curve."""

    def __init__(self, r_start: np.ndarray, r_end: np.ndarray, mu: float):
        self.mu = mu
        self.r1 = float(np.linalg.norm(r_start))
        self.r2 = float(np.linalg.norm(r_end))
        cross = float(r_start[0] * r_end[1] - r_start[1] * r_end[0])
        dot = float(np.dot(r_start, r_end))
        self.dnu = math.atan2(cross, dot) % TWO_PI
        denom = 1.0 - math.cos(self.dnu)
        if abs(math.sin(self.dnu)) < 1e-12 or denom < 1e-12:
            raise DegenerateGeometry(
                "transfer angle of 0 or pi leaves the plane of motion undefined"
            )
        self.parameter = math.sin(self.dnu) * math.sqrt(self.r1 * self.r2 / denom)
        self.r_start = np.asarray(r_start, dtype=float)
        self.r_end = np.asarray(r_end, dtype=float)

    def _tof_and_y(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        c = _stumpff_c(z)
        s = _stumpff_s(z)
        y = self.r1 + self.r2 + self.parameter * (z * s - 1.0) / np.sqrt(c)
        y_pos = np.maximum(y, 0.0)
        chi = np.sqrt(y_pos / c)
        tof = (chi**3 * s + self.parameter * np.sqrt(y_pos)) / math.sqrt(self.mu)
        tof = np.where(y > 0.0, tof, -np.inf)
        return tof, y

    def z_lower_bound(self) -> float:
        """Largest z below which y(z) is negative (y grows with z)."""
        lo, hi = _Z_MIN, _Z_MAX
        _, y = self._tof_and_y(np.array([lo]))
        if y[0] >= 0.0:
            return lo
        for _ in range(_BISECT_STEPS):
            mid = 0.5 * (lo + hi)
            _, y = self._tof_and_y(np.array([mid]))
            if y[0] < 0.0:
                lo = mid
            else:
                hi = mid
        return hi

    def solve_grid(
        self, tofs: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Velocities for every time of flight; invalid entries masked out.

        Returns (v_start, v_end, valid) where the velocity arrays are
        (n, 2) and valid flags converged, genuinely elliptic solutions.
        """
        tofs = np.asarray(tofs, dtype=float)
        n = tofs.size
        lo = np.full(n, self.z_lower_bound())
        hi = np.full(n, _Z_MAX)
        for _ in range(_BISECT_STEPS):
            mid = 0.5 * (lo + hi)
            t_mid, _ = self._tof_and_y(mid)
            too_long = t_mid > tofs
            hi = np.where(too_long, mid, hi)
            lo = np.where(too_long, lo, mid)
        z = 0.5 * (lo + hi)
        t_final, y = self._tof_and_y(z)
        valid = np.abs(t_final - tofs) <= 1e-6 * tofs

        f = 1.0 - y / self.r1
        g = self.parameter * np.sqrt(np.maximum(y, 0.0) / self.mu)
        g_dot = 1.0 - y / self.r2
        valid &= np.abs(g) > 1e-12
        g_safe = np.where(np.abs(g) > 1e-12, g, 1.0)
        v_start = (self.r_end[None, :] - f[:, None] * self.r_start[None, :]) / g_safe[
            :, None
        ]
        v_end = (
            g_dot[:, None] * self.r_end[None, :] - self.r_start[None, :]
        ) / g_safe[:, None]
        # elliptic only: negative specific energy, z > 0 on this branch
        energy = 0.5 * np.sum(v_start * v_start, axis=1) - self.mu / self.r1
        valid &= energy < 0.0
        valid &= z > 1e-9
        return v_start, v_end, valid


def lambert_solve(problem: LambertProblem) -> LambertSolution:
    """Single elliptic prograde zero-revolution arc for the problem.

    Raises:
        DegenerateGeometry: Endpoints collinear with the focus.
        HyperbolicOrParabolic: The requested time needs an open orbit.
        NoConvergence: The bisection failed to match the time of flight.
    """
    geom = _Geometry(problem.r_start, problem.r_end, problem.grav.mu)
    v_start, v_end, valid = geom.solve_grid(np.array([problem.tof]))
    if not valid[0]:
        energy = 0.5 * float(np.dot(v_start[0], v_start[0])) - problem.grav.mu / geom.r1
        if np.isfinite(energy) and energy >= 0.0:
            raise HyperbolicOrParabolic(
                f"time of flight {problem.tof} s needs an open transfer orbit"
            )
        raise NoConvergence("universal-variable bisection failed")
    try:
        transfer = elements_from_state(
            PlanarState(problem.r_start, v_start[0]), problem.grav
        ).orbit
    except (DegenerateOrbit, HyperbolicOrParabolic) as exc:
        raise HyperbolicOrParabolic(str(exc)) from exc
    return LambertSolution(v_start[0].copy(), v_end[0].copy(), transfer)


@dataclass(frozen=True)
class LambertCandidate:
    """One grid point's transfer with its costs."""

    tof: float
    theta_depart: float
    theta_arrive: float
    j_c: float
    j_m: float
    schedule: ImpulseSchedule


@dataclass(frozen=True)
class LambertOptima:
    """Best grid transfers under each cost."""

    best_ce: LambertCandidate
    best_mi: LambertCandidate
    n_evaluated: int
    n_valid: int


def default_tof_grid(initial: PlanarOrbit, grav: Gravity = EARTH, points: int = 500) -> np.ndarray:
    """Times of flight spanning 0.05 to 3 initial-orbit periods."""
    period = initial.period(grav)
    return np.linspace(0.05 * period, 3.0 * period, points)


def default_theta_grid(points: int = 720) -> np.ndarray:
    """Polar angles covering a full turn."""
    return np.arange(points) * TWO_PI / points


def _candidate(
    scenario,
    tof: float,
    theta_depart: float,
    theta_arrive: float,
    dv1: float,
    dv2: float,
) -> LambertCandidate:
    burn1 = Impulse(
        theta=wrap_angle(theta_depart),
        radius=radius_at(scenario.initial, theta_depart),
        dv=dv1,
        tangential=False,
    )
    burn2 = Impulse(
        theta=wrap_angle(theta_arrive),
        radius=radius_at(scenario.final, theta_arrive),
        dv=dv2,
        tangential=False,
    )
    schedule = ImpulseSchedule(
        impulses=(burn1, burn2), arc_times=(tof,), total_time=tof
    )
    return LambertCandidate(
        tof=tof,
        theta_depart=wrap_angle(theta_depart),
        theta_arrive=wrap_angle(theta_arrive),
        j_c=dv1 + dv2,
        j_m=max(dv1, dv2),
        schedule=schedule,
    )


class _BestTracker:
    """Deterministic argmin: cost, then smaller tof, then smaller angles."""

    def __init__(self) -> None:
        self.key: tuple[float, float, float, float] | None = None
        self.payload = None

    def offer(
        self, cost: float, tof: float, theta_dep: float, theta_arr: float, payload
    ) -> None:
        key = (cost, tof, theta_dep, theta_arr)
        if self.key is None or key < self.key:
            self.key = key
            self.payload = payload


def _scan_pairs(scenario, pairs, tof_grid):
    """Evaluate Lambert costs over (theta_depart, theta_arrive) pairs.

    pairs is an iterable of angle pairs; each is combined with every time
    of flight in tof_grid. Returns trackers and evaluation counters.
    """
    mu = scenario.grav.mu
    tofs = np.asarray(tof_grid, dtype=float)
    best_ce = _BestTracker()
    best_mi = _BestTracker()
    n_eval = 0
    n_valid = 0
    for theta_dep, theta_arr in pairs:
        dep = state_from_elements(OrbitPosition(scenario.initial, theta_dep), scenario.grav)
        arr = state_from_elements(OrbitPosition(scenario.final, theta_arr), scenario.grav)
        try:
            geom = _Geometry(dep.position, arr.position, mu)
        except DegenerateGeometry:
            n_eval += tofs.size
            continue
        v_start, v_end, valid = geom.solve_grid(tofs)
        n_eval += tofs.size
        if not valid.any():
            continue
        dv1 = np.linalg.norm(v_start - dep.velocity[None, :], axis=1)
        dv2 = np.linalg.norm(arr.velocity[None, :] - v_end, axis=1)
        j_c = np.where(valid, dv1 + dv2, np.inf)
        j_m = np.where(valid, np.maximum(dv1, dv2), np.inf)
        n_valid += int(valid.sum())
        i_c = int(np.argmin(j_c))
        i_m = int(np.argmin(j_m))
        if np.isfinite(j_c[i_c]):
            best_ce.offer(
                float(j_c[i_c]),
                float(tofs[i_c]),
                theta_dep,
                theta_arr,
                (theta_dep, theta_arr, float(tofs[i_c]), float(dv1[i_c]), float(dv2[i_c])),
            )
        if np.isfinite(j_m[i_m]):
            best_mi.offer(
                float(j_m[i_m]),
                float(tofs[i_m]),
                theta_dep,
                theta_arr,
                (theta_dep, theta_arr, float(tofs[i_m]), float(dv1[i_m]), float(dv2[i_m])),
            )
    return best_ce, best_mi, n_eval, n_valid


def lambert_scenario_a(scenario, tof_grid: np.ndarray | None = None) -> LambertOptima:
    """Grid search over time of flight with both endpoints fixed.

    Departure is (initial orbit, theta_first); arrival is (final orbit,
    theta_last). Impulses are full vector velocity differences.

    Raises:
        AllGridPointsFailed: No time of flight admits an elliptic arc.
    """
    tofs = (
        np.asarray(tof_grid, dtype=float)
        if tof_grid is not None
        else default_tof_grid(scenario.initial, scenario.grav)
    )
    pairs = [(scenario.theta_first, scenario.theta_last)]
    best_ce, best_mi, n_eval, n_valid = _scan_pairs(scenario, pairs, tofs)
    if best_ce.payload is None or best_mi.payload is None:
        raise AllGridPointsFailed("no elliptic transfer on the time grid")
    ce = _candidate(scenario, best_ce.payload[2], best_ce.payload[0], best_ce.payload[1], best_ce.payload[3], best_ce.payload[4])
    mi = _candidate(scenario, best_mi.payload[2], best_mi.payload[0], best_mi.payload[1], best_mi.payload[3], best_mi.payload[4])
    return LambertOptima(ce, mi, n_eval, n_valid)


def lambert_scenario_b(
    scenario,
    tof_grid: np.ndarray | None = None,
    theta_grid: np.ndarray | None = None,
    vary: str = "arrival",
) -> LambertOptima:
    """Grid search over time of flight plus one sliding endpoint angle.

    vary selects which endpoint slides along its orbit: "arrival" frees
    the arrival polar angle (departure stays at theta_first), "departure"
    frees the departure angle (arrival stays at theta_last), and "both"
    searches the full angle-angle grid.

    Raises:
        AllGridPointsFailed: No grid point admits an elliptic arc.
    """
    if vary not in ("arrival", "departure", "both"):
        raise ValueError(f"vary must be arrival, departure or both, got {vary!r}")
    tofs = (
        np.asarray(tof_grid, dtype=float)
        if tof_grid is not None
        else default_tof_grid(scenario.initial, scenario.grav)
    )
    thetas = (
        np.asarray(theta_grid, dtype=float)
        if theta_grid is not None
        else default_theta_grid()
    )
    if vary == "arrival":
        pairs = [(scenario.theta_first, float(t)) for t in thetas]
    elif vary == "departure":
        pairs = [(float(t), scenario.theta_last) for t in thetas]
    else:
        pairs = [
            (float(t0), float(t1)) for t0 in thetas for t1 in thetas
        ]
    best_ce, best_mi, n_eval, n_valid = _scan_pairs(scenario, pairs, tofs)
    if best_ce.payload is None or best_mi.payload is None:
        raise AllGridPointsFailed("no elliptic transfer on the search grid")
    ce = _candidate(scenario, best_ce.payload[2], best_ce.payload[0], best_ce.payload[1], best_ce.payload[3], best_ce.payload[4])
    mi = _candidate(scenario, best_mi.payload[2], best_mi.payload[0], best_mi.payload[1], best_mi.payload[3], best_mi.payload[4])
    return LambertOptima(ce, mi, n_eval, n_valid)
