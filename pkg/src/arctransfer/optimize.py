"""Impulse cost functions and the adjustable-parameter sweep.

The three-impulse family is parameterized by the interior perigee
rotation (parameter id ``omega2``). Sweeping it over a full turn while
warm-starting each solve from its neighbor traces one continuous solution
branch; the two points where the first or last burn vanishes are the
family's two-impulse members and are refined by direct square solves.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chains import (
    AdjustableSet,
    ImpulseSchedule,
    ManeuverScenario,
    TransferChain,
    assemble_system,
    impulse_schedule,
    solve_chain,
    two_impulse_chains,
)
from .conics import TWO_PI, wrap_angle
from .errors import (
    NoConvergence,
    NonEllipticSolution,
    RadiusOutsideOrbit,
    SingularJacobian,
)

_SOLVE_ERRORS = (NoConvergence, SingularJacobian, NonEllipticSolution, RadiusOutsideOrbit, ValueError)

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
REFINE_TOL_DEG = 1e-4


@dataclass(frozen=True)
class CostReport:
    """Control-effort and max-impulse costs of one impulse schedule."""

    j_c: float
    j_m: float
    per_impulse: tuple[float, ...]
    total_time: float


def cost_ce(schedule: ImpulseSchedule) -> float:
    """Control effort: sum of impulse magnitudes (km/s)."""
    return float(sum(schedule.magnitudes))


def cost_mi(schedule: ImpulseSchedule) -> float:
    """Maximum single impulse magnitude (km/s)."""
    return float(max(schedule.magnitudes, default=0.0))


def cost_report(schedule: ImpulseSchedule) -> CostReport:
    return CostReport(
        j_c=cost_ce(schedule),
        j_m=cost_mi(schedule),
        per_impulse=schedule.magnitudes,
        total_time=schedule.total_time,
    )


@dataclass(frozen=True)
class SweepSample:
    """One grid value of the adjustable with its solve outcome."""

    omega2_deg: float
    converged: bool
    report: CostReport | None = None
    chain: TransferChain | None = None

    @property
    def signed_dvs(self) -> tuple[float, ...] | None:
        if self.chain is None:
            return None
        return tuple(b.dv for b in impulse_schedule(self.chain).impulses)


@dataclass(frozen=True)
class SweepOptimum:
    """A refined cost minimum of the swept family."""

    omega2_deg: float
    report: CostReport
    chain: TransferChain


@dataclass(frozen=True)
class TwoImpulsePoint:
    """Family member whose first or last burn vanishes."""

    omega2_deg: float
    vanished_impulse: int  # 1-based burn index that is (near) zero
    report: CostReport
    chain: TransferChain


@dataclass(frozen=True)
class SweepResult:
    samples: tuple[SweepSample, ...]
    argmin_ce: SweepOptimum | None
    argmin_mi: SweepOptimum | None
    two_impulse_points: tuple[TwoImpulsePoint, ...]

    @property
    def convergence_rate(self) -> float:
        if not self.samples:
            return 0.0
        return sum(1 for s in self.samples if s.converged) / len(self.samples)


def _scenario_at(scenario: ManeuverScenario, omega2_rad: float) -> ManeuverScenario:
    return ManeuverScenario(
        initial=scenario.initial,
        final=scenario.final,
        theta_first=scenario.theta_first,
        theta_last=scenario.theta_last,
        n_impulses=scenario.n_impulses,
        adjustables=scenario.adjustables.replace("omega2", omega2_rad),
        grav=scenario.grav,
    )


_SWEEP_MAX_ITER = 250


def _solve_at(
    scenario: ManeuverScenario, omega2_deg: float, guess: np.ndarray | None
) -> TransferChain | None:
    try:
        return solve_chain(
            _scenario_at(scenario, math.radians(omega2_deg)),
            guess,
            max_iter=_SWEEP_MAX_ITER,
        )
    except _SOLVE_ERRORS:
        return None


def _report_of(chain: TransferChain) -> CostReport | None:
    try:
        return cost_report(impulse_schedule(chain))
    except RadiusOutsideOrbit:
        return None


def sweep_omega2(
    scenario: ManeuverScenario,
    grid_step_deg: float = 0.25,
    refine: bool = True,
    warm_start: bool = True,
) -> SweepResult:
    """Sweep the interior perigee rotation over [0, 360) degrees.

    The branch is anchored at the family member whose first burn vanishes
    (there the adjustable equals the initial orbit's own perigee rotation
    and the remaining unknowns solve a square system), then marched both
    ways with warm starts, which keeps every sample on one continuous
    branch. With warm_start False every grid point is solved cold from the
    default guess; samples may then hop between branches. Results are
    deterministic for fixed inputs.

    The scenario must have exactly one adjustable, named omega2.
    """
    if scenario.n_impulses != 3:
        raise ValueError("the sweep adjusts omega2 of a 3-impulse scenario")
    if "omega2" not in scenario.adjustables.as_dict():
        raise ValueError("scenario must name omega2 as its adjustable")

    grid = [round(k * grid_step_deg, 10) for k in range(int(round(360.0 / grid_step_deg)))]
    n = len(grid)
    chains: list[TransferChain | None] = [None] * n

    if warm_start:
        anchors = two_impulse_chains(scenario)
        seed_chain = None
        if anchors:
            seed_chain = min(
                anchors, key=lambda c: cost_ce(impulse_schedule(c))
            )
        anchor_deg = (
            math.degrees(seed_chain.orbits[1].omega) if seed_chain is not None else 0.0
        )
        start_idx = int(round(anchor_deg / grid_step_deg)) % n
        seed_guess = None
        if seed_chain is not None:
            system = assemble_system(_scenario_at(scenario, math.radians(grid[start_idx])))
            seed_guess = system.pack(seed_chain)
        chains[start_idx] = _solve_at(scenario, grid[start_idx], seed_guess)
        for direction in (1, -1):
            prev = chains[start_idx]
            idx = start_idx
            for _ in range(n - 1):
                idx = (idx + direction) % n
                if chains[idx] is not None:
                    break
                guess = None
                if prev is not None:
                    system = assemble_system(
                        _scenario_at(scenario, math.radians(grid[idx]))
                    )
                    guess = system.pack(prev)
                got = _solve_at(scenario, grid[idx], guess)
                if got is None and guess is not None:
                    got = _solve_at(scenario, grid[idx], None)
                chains[idx] = got
                if got is not None:
                    prev = got
        # continuation flood: retry holes from converged neighbors; each
        # (hole, neighbor) pair is attempted once, so the pass count is
        # bounded and the outcome deterministic
        tried: dict[int, set[int]] = {}
        while True:
            changed = False
            for i in range(n):
                if chains[i] is not None:
                    continue
                for j in ((i - 1) % n, (i + 1) % n):
                    if chains[j] is None or j in tried.setdefault(i, set()):
                        continue
                    tried[i].add(j)
                    system = assemble_system(
                        _scenario_at(scenario, math.radians(grid[i]))
                    )
                    got = _solve_at(scenario, grid[i], system.pack(chains[j]))
                    if got is not None:
                        chains[i] = got
                        changed = True
                        break
            if not changed:
                break
    else:
        for i, w in enumerate(grid):
            chains[i] = _solve_at(scenario, w, None)

    samples = []
    for w, chain in zip(grid, chains):
        report = _report_of(chain) if chain is not None else None
        if report is None:
            samples.append(SweepSample(w, False))
        else:
            samples.append(SweepSample(w, True, report, chain))

    converged = [s for s in samples if s.converged]

    def refine_minimum(cost_of) -> SweepOptimum | None:
        if not converged:
            return None
        best = min(converged, key=lambda s: (cost_of(s.report), s.omega2_deg))
        if not refine:
            return SweepOptimum(best.omega2_deg, best.report, best.chain)
        lo = best.omega2_deg - grid_step_deg
        hi = best.omega2_deg + grid_step_deg
        cache: dict[float, tuple[CostReport, TransferChain] | None] = {}

        def eval_at(w: float):
            if w in cache:
                return cache[w]
            system = assemble_system(_scenario_at(scenario, math.radians(w)))
            chain = _solve_at(scenario, w, system.pack(best.chain))
            report = _report_of(chain) if chain is not None else None
            cache[w] = None if report is None else (report, chain)
            return cache[w]

        a, b = lo, hi
        c1 = b - _GOLDEN * (b - a)
        c2 = a + _GOLDEN * (b - a)
        r1, r2 = eval_at(c1), eval_at(c2)
        while b - a > REFINE_TOL_DEG:
            v1 = cost_of(r1[0]) if r1 else math.inf
            v2 = cost_of(r2[0]) if r2 else math.inf
            if v1 <= v2:
                b, c2, r2 = c2, c1, r1
                c1 = b - _GOLDEN * (b - a)
                r1 = eval_at(c1)
            else:
                a, c1, r1 = c1, c2, r2
                c2 = a + _GOLDEN * (b - a)
                r2 = eval_at(c2)
        mid = 0.5 * (a + b)
        refined = eval_at(mid)
        candidates = [(best.report, best.chain, best.omega2_deg)]
        if refined is not None:
            candidates.append((refined[0], refined[1], mid))
        report, chain, w = min(candidates, key=lambda c: (cost_of(c[0]), c[2]))
        return SweepOptimum(wrap_angle_deg(w), report, chain)

    argmin_ce = refine_minimum(lambda r: r.j_c)
    argmin_mi = refine_minimum(lambda r: r.j_m)

    points = []
    for chain in two_impulse_chains(scenario):
        schedule = impulse_schedule(chain)
        dvs = [abs(b.dv) for b in schedule.impulses]
        vanished = 1 + int(np.argmin(dvs))
        # the second arc's perigee rotation is the family parameter
        omega2 = chain.orbits[1].omega
        points.append(
            TwoImpulsePoint(
                omega2_deg=math.degrees(omega2),
                vanished_impulse=vanished,
                report=cost_report(schedule),
                chain=chain,
            )
        )

    # prefer lower-cost points when both burns vanish at the same member
    points.sort(key=lambda p: (p.report.j_c, p.omega2_deg))

    result = SweepResult(
        samples=tuple(samples),
        argmin_ce=argmin_ce,
        argmin_mi=argmin_mi,
        two_impulse_points=tuple(points),
    )
    return result


def wrap_angle_deg(deg: float) -> float:
    return math.degrees(wrap_angle(math.radians(deg)))


def sweep_to_csv(result: SweepResult) -> str:
    """Sweep samples as CSV text with fixed 6-significant-digit formatting."""
    lines = ["omega2_deg,dv1,dv2,dv3,jc,jm,time_s,converged"]
    for s in result.samples:
        if s.converged:
            dvs = s.signed_dvs
            lines.append(
                "%s,%s,%s,%s,%s,%s,%s,1"
                % (
                    _fmt(s.omega2_deg),
                    _fmt(dvs[0]),
                    _fmt(dvs[1]),
                    _fmt(dvs[2]),
                    _fmt(s.report.j_c),
                    _fmt(s.report.j_m),
                    _fmt(s.report.total_time),
                )
            )
        else:
            lines.append("%s,,,,,,,0" % _fmt(s.omega2_deg))
    return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return format(float(x), ".6g")
