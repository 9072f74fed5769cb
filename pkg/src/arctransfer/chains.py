"""Smooth multi-impulse transfer chains from tangent confocal elliptic arcs.

A chain of N+1 orbits meets at N junctions. At each junction the two
neighboring conics must share the radius and the polar slope dr/dtheta,
which makes every impulse purely tangential. Writing both conditions for
the junction angle t between orbits i and j gives two residuals

    f1 = e_i sin(t + w_i) + e_i e_j sin(w_i - w_j) - e_j sin(t + w_j)
    f2 = p_i [1 + e_j cos(t + w_j)] - p_j [1 + e_i cos(t + w_i)]

with p = a (1 - e^2). Stacking them over all junctions yields a nonlinear
system in the interior orbit elements and interior junction angles, solved
here with a damped Newton iteration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .conics import (
    EARTH,
    TWO_PI,
    Gravity,
    OrbitPosition,
    PlanarOrbit,
    PlanarState,
    elements_from_state,
    radius_at,
    shortest_arc,
    slope_at,
    speed_at,
    state_from_elements,
    time_of_flight,
    wrap_angle,
    _orbits_identical,
)
from .errors import (
    DegenerateOrbit,
    DimensionMismatch,
    HyperbolicOrParabolic,
    IdenticalOrbits,
    NoConvergence,
    NonEllipticSolution,
    SingularJacobian,
)

NEWTON_TOL = 1e-10
NEWTON_MAX_ITER = 2000
NEWTON_MIN_RELAX = 1.0 / 64.0
JACOBIAN_REL_STEP = 1e-7

CHAIN_RADIUS_TOL = 1e-6  # km
CHAIN_SLOPE_TOL = 1e-6  # km/rad

# interior arcs this close to parabolic are degeneracy artifacts of the
# junction polynomials (the semi-latus rectum vanishes), not transfers
MAX_INTERIOR_ECC = 1.0 - 1e-9


def slope_match_residual(orbit_i: PlanarOrbit, orbit_j: PlanarOrbit, theta: float) -> float:
    """Tangent-direction residual f1 at a junction; zero when slopes agree."""
    return _f1(orbit_i.e, orbit_i.omega, orbit_j.e, orbit_j.omega, theta)


def radius_match_residual(orbit_i: PlanarOrbit, orbit_j: PlanarOrbit, theta: float) -> float:
    """Radius-continuity residual f2 at a junction (km); zero when radii agree."""
    return _f2(
        orbit_i.a, orbit_i.e, orbit_i.omega, orbit_j.a, orbit_j.e, orbit_j.omega, theta
    )


def _f1(ei: float, wi: float, ej: float, wj: float, t: float) -> float:
    return ei * math.sin(t + wi) + ei * ej * math.sin(wi - wj) - ej * math.sin(t + wj)


def _f2(ai: float, ei: float, wi: float, aj: float, ej: float, wj: float, t: float) -> float:
    return ai * (1.0 - ei * ei) * (1.0 + ej * math.cos(t + wj)) - aj * (
        1.0 - ej * ej
    ) * (1.0 + ei * math.cos(t + wi))


@dataclass(frozen=True)
class AdjustableSet:
    """Values assigned to interior parameters to square the junction system.

    Parameter ids name interior quantities: ``a2``, ``e2``, ``omega2`` ...
    for orbits 2..N and ``theta23`` ... for interior junction angles.
    """

    assignments: tuple[tuple[str, float], ...] = ()

    def __post_init__(self) -> None:
        ids = [pid for pid, _ in self.assignments]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate adjustable ids in {ids}")

    def __len__(self) -> int:
        return len(self.assignments)

    def as_dict(self) -> dict[str, float]:
        return dict(self.assignments)

    def replace(self, pid: str, value: float) -> "AdjustableSet":
        items = [(p, value if p == pid else v) for p, v in self.assignments]
        return AdjustableSet(tuple(items))


def _parse_param_id(pid: str, n_impulses: int) -> tuple[str, int]:
    """Split a parameter id into (kind, orbit-or-junction index); validates range."""
    n = n_impulses
    if pid.startswith("theta"):
        digits = pid[len("theta") :]
        for split in range(1, len(digits)):
            i = int(digits[:split])
            if digits == f"{i}{i + 1}":
                if not 2 <= i <= n - 1:
                    raise ValueError(
                        f"junction angle {pid} is not interior for {n} impulses"
                    )
                return "theta", i
        raise ValueError(f"malformed junction id {pid!r}; expected e.g. 'theta23'")
    for kind in ("omega", "a", "e"):
        if pid.startswith(kind) and pid[len(kind) :].isdigit():
            i = int(pid[len(kind) :])
            if not 2 <= i <= n:
                raise ValueError(f"{pid} does not name an interior orbit for {n} impulses")
            return kind, i
    raise ValueError(f"unknown parameter id {pid!r}")


@dataclass(frozen=True)
class ManeuverScenario:
    """Problem statement for an N-impulse transfer between two fixed points.

    theta_first is the departure junction polar angle on the initial orbit,
    theta_last the arrival junction polar angle on the final orbit. For
    N >= 3 the interior parameter count exceeds the equation count by
    2N - 5, so that many adjustables must be assigned; N = 2 takes none
    (its system is overdetermined and only consistent geometries solve).
    """

    initial: PlanarOrbit
    final: PlanarOrbit
    theta_first: float
    theta_last: float
    n_impulses: int = 2
    adjustables: AdjustableSet = AdjustableSet()
    grav: Gravity = EARTH

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta_first", wrap_angle(self.theta_first))
        object.__setattr__(self, "theta_last", wrap_angle(self.theta_last))
        if self.n_impulses < 2:
            raise ValueError(f"need at least 2 impulses, got {self.n_impulses}")
        required = max(2 * self.n_impulses - 5, 0)
        if len(self.adjustables) != required:
            raise DimensionMismatch(
                f"{self.n_impulses}-impulse scenario needs {required} adjustables, "
                f"got {len(self.adjustables)}"
            )
        for pid, _ in self.adjustables.assignments:
            _parse_param_id(pid, self.n_impulses)
        if _orbits_identical(self.initial, self.final) and (
            abs(shortest_arc(self.theta_first, self.theta_last)) < 1e-12
        ):
            raise IdenticalOrbits("initial and final orbit and angles coincide")


@dataclass(frozen=True)
class SolveDiagnostics:
    iterations: int
    residual_norm: float
    relaxations: int


@dataclass(frozen=True)
class Impulse:
    """One tangential or vector burn at a junction."""

    theta: float
    radius: float
    dv: float  # signed speed change for tangential burns, magnitude otherwise
    tangential: bool = True


@dataclass(frozen=True)
class ImpulseSchedule:
    """Per-junction burns plus coast times of the arcs between them."""

    impulses: tuple[Impulse, ...]
    arc_times: tuple[float, ...]
    total_time: float

    @property
    def magnitudes(self) -> tuple[float, ...]:
        return tuple(abs(b.dv) for b in self.impulses)


@dataclass(frozen=True)
class TransferChain:
    """Ordered orbits 1..N+1 with the N junction polar angles joining them."""

    orbits: tuple[PlanarOrbit, ...]
    junctions: tuple[float, ...]
    grav: Gravity = EARTH
    diagnostics: SolveDiagnostics | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if len(self.orbits) != len(self.junctions) + 1:
            raise ValueError("need exactly one more orbit than junctions")
        object.__setattr__(
            self, "junctions", tuple(wrap_angle(t) for t in self.junctions)
        )

    @property
    def n_impulses(self) -> int:
        return len(self.junctions)

    def junction_residuals(self) -> list[tuple[float, float]]:
        """(f1, f2) pairs for every junction."""
        out = []
        for k, theta in enumerate(self.junctions):
            out.append(
                (
                    slope_match_residual(self.orbits[k], self.orbits[k + 1], theta),
                    radius_match_residual(self.orbits[k], self.orbits[k + 1], theta),
                )
            )
        return out

    def max_scaled_residual(self) -> float:
        scale = self.orbits[0].a
        return max(
            max(abs(f1), abs(f2) / scale) for f1, f2 in self.junction_residuals()
        )


def _canonical_elements(a: float, e: float, omega: float) -> tuple[float, float, float]:
    """Map a negative-eccentricity representation onto the standard one.

    (a, -e, w) and (a, e, w + pi) describe the same conic.
    """
    if e < 0.0:
        return a, -e, wrap_angle(omega + math.pi)
    return a, e, wrap_angle(omega)


class JunctionSystem:
    """Residual vector of the junction conditions over the unknown vector.

    Unknowns are ordered (a_2, e_2, w_2, ..., a_N, e_N, w_N,
    theta_23, ..., theta_(N-1)N) with adjustable-assigned entries removed.
    Residuals stack (f1, f2) for junctions 1..N; f2 rows are scaled by the
    initial orbit's semi-major axis for convergence tests.
    """

    def __init__(self, scenario: ManeuverScenario):
        self.scenario = scenario
        n = scenario.n_impulses
        fixed = {}
        for pid, value in scenario.adjustables.assignments:
            kind, idx = _parse_param_id(pid, n)
            fixed[(kind, idx)] = float(value)
        self.fixed = fixed
        names: list[tuple[str, int]] = []
        for i in range(2, n + 1):
            for kind in ("a", "e", "omega"):
                if (kind, i) not in fixed:
                    names.append((kind, i))
        for i in range(2, n):
            if ("theta", i) not in fixed:
                names.append(("theta", i))
        self.unknown_names = tuple(names)
        self.n_equations = 2 * n
        if n >= 3 and len(names) != self.n_equations:
            raise DimensionMismatch(
                f"{len(names)} unknowns vs {self.n_equations} equations"
            )
        scale = np.ones(self.n_equations)
        scale[1::2] = scenario.initial.a
        self.row_scale = scale

    @property
    def n_unknowns(self) -> int:
        return len(self.unknown_names)

    def _params(self, x: np.ndarray) -> tuple[list[tuple[float, float, float]], list[float]]:
        """Raw (a, e, omega) triples for orbits 1..N+1 and junction angles."""
        s = self.scenario
        n = s.n_impulses
        values = dict(zip(self.unknown_names, x))
        values.update(self.fixed)
        orbits = [(s.initial.a, s.initial.e, s.initial.omega)]
        for i in range(2, n + 1):
            orbits.append((values[("a", i)], values[("e", i)], values[("omega", i)]))
        orbits.append((s.final.a, s.final.e, s.final.omega))
        junctions = [s.theta_first]
        junctions += [values[("theta", i)] for i in range(2, n)]
        junctions.append(s.theta_last)
        return orbits, junctions

    def residual(self, x: np.ndarray) -> np.ndarray:
        orbits, junctions = self._params(x)
        out = np.empty(self.n_equations)
        for k in range(self.scenario.n_impulses):
            ai, ei, wi = orbits[k]
            aj, ej, wj = orbits[k + 1]
            t = junctions[k]
            out[2 * k] = _f1(ei, wi, ej, wj, t)
            out[2 * k + 1] = _f2(ai, ei, wi, aj, ej, wj, t)
        return out

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.residual(x)

    def default_guess(self) -> np.ndarray:
        """Interior elements interpolated between the boundary orbits.

        Eccentricities are clamped to [0.05, 0.9]: a circular guess makes
        the Jacobian singular.
        """
        s = self.scenario
        n = s.n_impulses
        d_omega = shortest_arc(s.initial.omega, s.final.omega)
        span = wrap_angle(s.theta_last - s.theta_first)
        if span == 0.0:
            span = TWO_PI
        values = {}
        for i in range(2, n + 1):
            f = (i - 1) / n
            values[("a", i)] = s.initial.a + (s.final.a - s.initial.a) * f
            values[("e", i)] = min(max(s.initial.e + (s.final.e - s.initial.e) * f, 0.05), 0.9)
            values[("omega", i)] = wrap_angle(s.initial.omega + d_omega * f)
        for i in range(2, n):
            values[("theta", i)] = wrap_angle(s.theta_first + span * (i - 1) / (n - 1))
        return np.array([values[name] for name in self.unknown_names])

    def pack(self, chain: TransferChain) -> np.ndarray:
        """Unknown vector reproducing an existing chain (warm starts)."""
        values = {}
        for i, orbit in enumerate(chain.orbits[1:-1], start=2):
            values[("a", i)] = orbit.a
            values[("e", i)] = orbit.e
            values[("omega", i)] = orbit.omega
        for i, theta in enumerate(chain.junctions[1:-1], start=2):
            values[("theta", i)] = theta
        return np.array([values[name] for name in self.unknown_names])

    def chain_from(
        self, x: np.ndarray, diagnostics: SolveDiagnostics | None = None
    ) -> TransferChain:
        """Build the chain for a solved unknown vector.

        Raises:
            NonEllipticSolution: Any interior arc has a <= 0 or |e| >= 1.
        """
        raw_orbits, junctions = self._params(x)
        orbits = [self.scenario.initial]
        for a, e, omega in raw_orbits[1:-1]:
            a, e, omega = _canonical_elements(a, e, omega)
            if not (a > 0.0 and 0.0 <= e < MAX_INTERIOR_ECC):
                raise NonEllipticSolution(f"interior arc has a={a}, e={e}")
            orbits.append(PlanarOrbit(a, e, omega))
        orbits.append(self.scenario.final)
        return TransferChain(
            tuple(orbits), tuple(junctions), self.scenario.grav, diagnostics
        )


def assemble_system(scenario: ManeuverScenario) -> JunctionSystem:
    """Junction residual system for the scenario.

    For N >= 3 the system is square (2N equations in 2N unknowns once the
    adjustables are fixed). For N = 2 it is overdetermined, 4 equations in
    (a2, e2, w2); only consistent boundary geometries admit a root.
    """
    return JunctionSystem(scenario)


def finite_difference_jacobian(
    func, x: np.ndarray, rel_step: float = JACOBIAN_REL_STEP
) -> np.ndarray:
    """Central-difference Jacobian of a vector function."""
    x = np.asarray(x, dtype=float)
    f0 = np.asarray(func(x))
    jac = np.empty((f0.size, x.size))
    for j in range(x.size):
        h = rel_step * max(1.0, abs(x[j]))
        xp = x.copy()
        xm = x.copy()
        xp[j] += h
        xm[j] -= h
        jac[:, j] = (np.asarray(func(xp)) - np.asarray(func(xm))) / (2.0 * h)
    return jac


def _damped_newton(
    func,
    x0: np.ndarray,
    row_scale: np.ndarray,
    tol: float = NEWTON_TOL,
    max_iter: int = NEWTON_MAX_ITER,
) -> tuple[np.ndarray, SolveDiagnostics]:
    """Newton iteration with step halving until the residual norm drops.

    The relaxation factor is halved from 1 down to 1/64; if even the
    smallest step does not reduce the norm it is taken anyway and the
    iteration cap decides. Least squares replaces the linear solve for
    non-square systems.

    Raises:
        SingularJacobian: Linear solve failed or produced non-finite steps.
        NoConvergence: Tolerance not reached within max_iter iterations.
    """
    x = np.asarray(x0, dtype=float).copy()
    fx = np.asarray(func(x))
    square = fx.size == x.size

    def norm(f: np.ndarray) -> float:
        return float(np.max(np.abs(f / row_scale)))

    nx = norm(fx)
    relaxations = 0
    for iteration in range(max_iter):
        if nx < tol:
            return x, SolveDiagnostics(iteration, nx, relaxations)
        jac = finite_difference_jacobian(func, x)
        if not np.all(np.isfinite(jac)):
            raise SingularJacobian("non-finite Jacobian entries")
        try:
            if square:
                step = np.linalg.solve(jac, -fx)
            else:
                step = np.linalg.lstsq(jac, -fx, rcond=None)[0]
        except np.linalg.LinAlgError as exc:
            raise SingularJacobian(str(exc)) from exc
        if not np.all(np.isfinite(step)):
            raise SingularJacobian("singular Jacobian produced a non-finite step")
        lam = 1.0
        while True:
            x_new = x + lam * step
            f_new = np.asarray(func(x_new))
            n_new = norm(f_new)
            if n_new < nx or lam <= NEWTON_MIN_RELAX:
                break
            lam *= 0.5
        if lam < 1.0:
            relaxations += 1
        x, fx, nx = x_new, f_new, n_new
    if nx < tol:
        return x, SolveDiagnostics(max_iter, nx, relaxations)
    raise NoConvergence(
        f"residual norm {nx:.3e} above {tol:.1e} after {max_iter} iterations"
    )


def verify_chain(chain: TransferChain) -> None:
    """Check radius and slope continuity at every junction.

    Raises:
        NoConvergence: A junction misses the continuity tolerances.
    """
    for k, theta in enumerate(chain.junctions):
        lo, hi = chain.orbits[k], chain.orbits[k + 1]
        dr = abs(radius_at(lo, theta) - radius_at(hi, theta))
        ds = abs(slope_at(lo, theta) - slope_at(hi, theta))
        if dr > CHAIN_RADIUS_TOL or ds > CHAIN_SLOPE_TOL:
            raise NoConvergence(
                f"junction {k + 1} discontinuous: dr={dr:.3e} km, dslope={ds:.3e}"
            )


def solve_chain(
    scenario: ManeuverScenario,
    guess: np.ndarray | None = None,
    max_iter: int = NEWTON_MAX_ITER,
) -> TransferChain:
    """Solve the junction system for a smooth transfer chain.

    Deterministic for a given guess; with no guess the interpolated default
    is used. The returned chain carries solver diagnostics.
    """
    system = assemble_system(scenario)
    x0 = np.asarray(guess, dtype=float) if guess is not None else system.default_guess()
    if x0.size != system.n_unknowns:
        raise DimensionMismatch(
            f"guess has {x0.size} entries, system has {system.n_unknowns} unknowns"
        )
    x, diag = _damped_newton(system.residual, x0, system.row_scale, max_iter=max_iter)
    chain = system.chain_from(x, diag)
    verify_chain(chain)
    return chain


def impulse_schedule(chain: TransferChain) -> ImpulseSchedule:
    """Signed tangential speed changes at the junctions plus coast times.

    Smooth junctions share radius and tangent direction, so the vector
    velocity change equals the vis-viva speed difference. Coasts cover the
    interior arcs only; there is no pre-maneuver coast on the initial orbit.
    """
    impulses = []
    for k, theta in enumerate(chain.junctions):
        r = radius_at(chain.orbits[k], theta)
        dv = speed_at(chain.orbits[k + 1], r, chain.grav) - speed_at(
            chain.orbits[k], r, chain.grav
        )
        impulses.append(Impulse(theta=theta, radius=r, dv=dv, tangential=True))
    arc_times = []
    for k in range(chain.n_impulses - 1):
        arc_times.append(
            time_of_flight(
                chain.orbits[k + 1],
                chain.junctions[k],
                chain.junctions[k + 1],
                chain.grav,
            )
        )
    return ImpulseSchedule(
        impulses=tuple(impulses),
        arc_times=tuple(arc_times),
        total_time=float(sum(arc_times)),
    )


def _perigee_residuals(
    e2: float,
    t23: float,
    a1: float,
    e1: float,
    a3: float,
    e3: float,
    w3: float,
) -> np.ndarray:
    """Reduced two-impulse system for a perigee departure, apse-aligned frame."""
    g1 = (a1 / a3) * ((1.0 - e1) / (1.0 - e3)) * (1.0 + e2) * (
        1.0 + e3 * math.cos(t23 + w3)
    ) - (1.0 + e3) * (1.0 + e2 * math.cos(t23))
    g2 = e2 * math.sin(t23) - e2 * e3 * math.sin(w3) - e3 * math.sin(t23 + w3)
    return np.array([g1, g2])


def two_impulse_perigee(
    initial: PlanarOrbit, final: PlanarOrbit, grav: Gravity = EARTH
) -> TransferChain:
    """Two-impulse chain departing at the perigee of the initial orbit.

    Working in a frame rotated so the initial apse line defines x, the
    transfer orbit shares the initial perigee (w2 = 0), leaving a 2x2
    system in (e2, theta23). A circular target admits the closed form
    theta23 = pi, e2 = (a3 - rp) / (a3 + rp) with rp the departure radius.

    The scenario's departure and arrival angles are not honored; the burn
    locations follow from the apse geometry.
    """
    if _orbits_identical(initial, final):
        raise IdenticalOrbits("no transfer between identical orbits")
    a1, e1 = initial.a, initial.e
    a3, e3 = final.a, final.e
    w3 = wrap_angle(final.omega - initial.omega)
    rp = initial.periapsis_radius

    if final.is_circular():
        e2 = (a3 - rp) / (a3 + rp)
        t23 = math.pi
        diag = SolveDiagnostics(0, 0.0, 0)
    else:
        r_target = radius_at(PlanarOrbit(a3, e3, w3), math.pi)
        e2_seed = min(max((r_target - rp) / (r_target + rp), -0.9), 0.9)
        x, diag = _damped_newton(
            lambda x: _perigee_residuals(x[0], x[1], a1, e1, a3, e3, w3),
            np.array([e2_seed, math.pi]),
            np.ones(2),
        )
        e2, t23 = float(x[0]), float(x[1])

    a2 = rp / (1.0 - e2)
    a2, e2, w2 = _canonical_elements(a2, e2, 0.0)
    if not (a2 > 0.0 and e2 < MAX_INTERIOR_ECC):
        raise NonEllipticSolution(f"transfer arc has a={a2}, e={e2}")

    # rotate back: the apse-aligned frame has theta' = theta + omega1
    rot = initial.omega
    orbit2 = PlanarOrbit(a2, e2, wrap_angle(w2 + rot))
    chain = TransferChain(
        (initial, orbit2, final),
        (wrap_angle(-rot), wrap_angle(t23 - rot)),
        grav,
        diag,
    )
    verify_chain(chain)
    return chain


def _tangency_gap(orbit_a: PlanarOrbit, orbit_b: PlanarOrbit) -> float:
    """Amplitude minus offset of the reciprocal-radius difference sinusoid.

    1/r_a - 1/r_b = R cos(theta + phi) + W is a pure sinusoid for confocal
    conics; the orbits intersect twice when R > |W|, touch tangentially
    when R = |W| and miss when R < |W|.
    """
    u, v, w = _sinusoid_coefficients(orbit_a, orbit_b)
    return math.hypot(u, v) - abs(w)


def _sinusoid_coefficients(
    orbit_a: PlanarOrbit, orbit_b: PlanarOrbit
) -> tuple[float, float, float]:
    pa, pb = orbit_a.semi_latus_rectum, orbit_b.semi_latus_rectum
    u = orbit_a.e * math.cos(orbit_a.omega) / pa - orbit_b.e * math.cos(orbit_b.omega) / pb
    v = orbit_a.e * math.sin(orbit_a.omega) / pa - orbit_b.e * math.sin(orbit_b.omega) / pb
    return u, v, 1.0 / pa - 1.0 / pb


def _tangency_angle(orbit_a: PlanarOrbit, orbit_b: PlanarOrbit) -> float:
    """Polar angle of the (near-)tangent contact of two conics."""
    u, v, w = _sinusoid_coefficients(orbit_a, orbit_b)
    phi = math.atan2(v, u)
    # R cos(theta + phi) = -W at the contact, with R ~ |W|
    if w <= 0.0:
        return wrap_angle(-phi)
    return wrap_angle(math.pi - phi)


def _tangent_orbits_through(
    anchor: PlanarOrbit,
    anchor_theta: float,
    partner: PlanarOrbit,
    grav: Gravity,
) -> list[PlanarOrbit]:
    """Orbits through a fixed point, tangent there to `anchor`, tangent somewhere to `partner`.

    Scaling the anchor-point velocity by a factor k in (0, escape) sweeps
    a one-parameter family of tangent orbits; each sign change of the
    tangency gap against the partner is bisected to a member that touches
    the partner orbit. Members are returned in increasing-k order.
    """
    state = state_from_elements(OrbitPosition(anchor, anchor_theta), grav)
    r = float(np.linalg.norm(state.position))
    v = float(np.linalg.norm(state.velocity))
    k_escape = math.sqrt(2.0 * grav.mu / r) / v

    def orbit_of(k: float) -> PlanarOrbit | None:
        try:
            return elements_from_state(
                PlanarState(state.position, k * state.velocity), grav
            ).orbit
        except (DegenerateOrbit, HyperbolicOrParabolic):
            return None

    def gap(k: float) -> float | None:
        orbit = orbit_of(k)
        if orbit is None:
            return None
        return _tangency_gap(orbit, partner)

    n_scan = 2000
    ks = [k_escape * (0.02 + (0.98 - 1e-9) * i / (n_scan - 1)) for i in range(n_scan)]
    gaps = [gap(k) for k in ks]
    out = []
    for i in range(n_scan - 1):
        g0, g1 = gaps[i], gaps[i + 1]
        if g0 is None or g1 is None or (g0 < 0.0) == (g1 < 0.0):
            continue
        lo, hi, g_lo = ks[i], ks[i + 1], g0
        for _ in range(120):
            mid = 0.5 * (lo + hi)
            g_mid = gap(mid)
            if g_mid is None:
                break
            if (g_lo < 0.0) == (g_mid < 0.0):
                lo, g_lo = mid, g_mid
            else:
                hi = mid
        orbit = orbit_of(0.5 * (lo + hi))
        if orbit is not None:
            out.append(orbit)
    return out


def two_impulse_chains(scenario: ManeuverScenario) -> tuple[TransferChain, ...]:
    """Degenerate three-impulse chains in which one burn vanishes.

    Either the first burn vanishes (the craft coasts on the initial orbit
    to a free junction and one transfer arc reaches the fixed arrival
    point) or the last one does (one transfer arc from the fixed departure
    point meets the final orbit at a free junction). Each case reduces to
    a one-parameter family of orbits through the fixed endpoint, and the
    free tangency supplies a scalar root condition, so no adjustable
    parameter is involved.

    Returns every chain found: vanished-first-burn members first, then
    vanished-last ones. The zero-burn arc duplicates its neighbor orbit.
    """
    s = scenario

    def residual_first(x: np.ndarray) -> np.ndarray:
        a_t, e_t, w_t, t_free = x
        return np.array(
            [
                _f1(s.initial.e, s.initial.omega, e_t, w_t, t_free),
                _f2(s.initial.a, s.initial.e, s.initial.omega, a_t, e_t, w_t, t_free),
                _f1(e_t, w_t, s.final.e, s.final.omega, s.theta_last),
                _f2(a_t, e_t, w_t, s.final.a, s.final.e, s.final.omega, s.theta_last),
            ]
        )

    def residual_last(x: np.ndarray) -> np.ndarray:
        a_t, e_t, w_t, t_free = x
        return np.array(
            [
                _f1(s.initial.e, s.initial.omega, e_t, w_t, s.theta_first),
                _f2(
                    s.initial.a, s.initial.e, s.initial.omega, a_t, e_t, w_t, s.theta_first
                ),
                _f1(e_t, w_t, s.final.e, s.final.omega, t_free),
                _f2(a_t, e_t, w_t, s.final.a, s.final.e, s.final.omega, t_free),
            ]
        )

    row_scale = np.array([1.0, s.initial.a, 1.0, s.initial.a])
    out: list[TransferChain] = []
    for which, residual in (("first", residual_first), ("last", residual_last)):
        if which == "first":
            anchor, anchor_theta, partner = s.final, s.theta_last, s.initial
        else:
            anchor, anchor_theta, partner = s.initial, s.theta_first, s.final
        for rough in _tangent_orbits_through(anchor, anchor_theta, partner, s.grav):
            # the closed-form member is accurate to ~1e-13 in the tangency
            # gap; a short Newton polish restores full junction continuity
            seed = np.array(
                [rough.a, rough.e, rough.omega, _tangency_angle(rough, partner)]
            )
            try:
                x, diag = _damped_newton(residual, seed, row_scale, max_iter=50)
                a_t, e_t, w_t = _canonical_elements(float(x[0]), float(x[1]), float(x[2]))
                if not (a_t > 0.0 and e_t < MAX_INTERIOR_ECC):
                    continue
                transfer = PlanarOrbit(a_t, e_t, w_t)
                t_free = wrap_angle(float(x[3]))
                if which == "first":
                    chain = TransferChain(
                        (s.initial, s.initial, transfer, s.final),
                        (s.theta_first, t_free, s.theta_last),
                        s.grav,
                        diag,
                    )
                else:
                    chain = TransferChain(
                        (s.initial, transfer, s.final, s.final),
                        (s.theta_first, t_free, s.theta_last),
                        s.grav,
                        diag,
                    )
                verify_chain(chain)
            except (NoConvergence, SingularJacobian, ValueError):
                continue
            out.append(chain)
    return tuple(out)
