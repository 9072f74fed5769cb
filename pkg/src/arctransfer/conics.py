"""Planar two-body conic geometry.

Orbits are coplanar ellipses sharing the central body as a focus. A point
is located by its polar angle theta measured counterclockwise from the
inertial x-axis; an orbit rotated by argument of perigee omega has true
anomaly nu = theta + omega, so the local radius is

    r(theta) = a (1 - e^2) / (1 + e cos(theta + omega))

All angles are radians internally, all lengths km, speeds km/s, times s.
Motion is prograde (counterclockwise) everywhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateOrbit,
    HyperbolicOrParabolic,
    IdenticalOrbits,
    RadiusOutsideOrbit,
)

MU_EARTH = 398600.4418  # km^3/s^2, WGS-84 derived
EARTH_EQUATORIAL_RADIUS = 6378.137  # km

TWO_PI = 2.0 * math.pi

# Below this eccentricity an orbit is treated as exactly circular for
# branch logic (omega is indeterminate on a circle).
CIRCULAR_ECC = 1e-12


def wrap_angle(angle: float) -> float:
    """Normalize an angle to [0, 2*pi)."""
    a = math.fmod(angle, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    return a if a < TWO_PI else 0.0


def shortest_arc(from_angle: float, to_angle: float) -> float:
    """Signed angular difference to - from, mapped to (-pi, pi]."""
    d = math.fmod(to_angle - from_angle, TWO_PI)
    if d > math.pi:
        d -= TWO_PI
    elif d <= -math.pi:
        d += TWO_PI
    return d


@dataclass(frozen=True)
class Gravity:
    """Central-body gravitational parameter (km^3/s^2)."""

    mu: float = MU_EARTH

    def __post_init__(self) -> None:
        if not self.mu > 0.0:
            raise ValueError(f"mu must be positive, got {self.mu}")


EARTH = Gravity()


@dataclass(frozen=True)
class PlanarOrbit:
    """One coplanar elliptic orbit: semi-major axis, eccentricity, perigee rotation.

    omega is the rotation of the apse line such that the true anomaly of a
    point at polar angle theta is theta + omega (perigee sits at polar
    angle -omega).
    """

    a: float
    e: float
    omega: float = 0.0

    def __post_init__(self) -> None:
        if not self.a > 0.0:
            raise ValueError(f"semi-major axis must be positive, got {self.a}")
        if not 0.0 <= self.e < 1.0:
            raise ValueError(f"eccentricity must be in [0, 1), got {self.e}")
        object.__setattr__(self, "omega", wrap_angle(self.omega))

    @property
    def semi_latus_rectum(self) -> float:
        return self.a * (1.0 - self.e * self.e)

    @property
    def periapsis_radius(self) -> float:
        return self.a * (1.0 - self.e)

    @property
    def apoapsis_radius(self) -> float:
        return self.a * (1.0 + self.e)

    def period(self, grav: Gravity = EARTH) -> float:
        """Orbital period (s)."""
        return TWO_PI * math.sqrt(self.a**3 / grav.mu)

    def is_circular(self) -> bool:
        return self.e < CIRCULAR_ECC


@dataclass(frozen=True)
class OrbitPosition:
    """An orbit plus a polar angle locating a point on it."""

    orbit: PlanarOrbit
    theta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    @property
    def radius(self) -> float:
        return radius_at(self.orbit, self.theta)


@dataclass(frozen=True, eq=False)
class PlanarState:
    """Inertial position/velocity pair in the orbital plane."""

    position: np.ndarray
    velocity: np.ndarray

    def __post_init__(self) -> None:
        pos = np.asarray(self.position, dtype=float).reshape(2).copy()
        vel = np.asarray(self.velocity, dtype=float).reshape(2).copy()
        pos.flags.writeable = False
        vel.flags.writeable = False
        object.__setattr__(self, "position", pos)
        object.__setattr__(self, "velocity", vel)
        if not np.linalg.norm(pos) > 0.0:
            raise ValueError("position must be nonzero")
        if not np.linalg.norm(vel) > 0.0:
            raise ValueError("velocity must be nonzero")


def radius_at(orbit: PlanarOrbit, theta: float) -> float:
    """Local radius of the conic at polar angle theta (km)."""
    return orbit.semi_latus_rectum / (1.0 + orbit.e * math.cos(theta + orbit.omega))


def slope_at(orbit: PlanarOrbit, theta: float) -> float:
    """Polar slope dr/dtheta at polar angle theta (km/rad)."""
    nu = theta + orbit.omega
    r = orbit.semi_latus_rectum / (1.0 + orbit.e * math.cos(nu))
    return orbit.e * math.sin(nu) * r / (1.0 + orbit.e * math.cos(nu))


def speed_at(orbit: PlanarOrbit, r: float, grav: Gravity = EARTH) -> float:
    """Vis-viva speed on the orbit at radius r (km/s).

    Raises:
        RadiusOutsideOrbit: If r is not within [periapsis, apoapsis]
            (a relative slack of 1e-9 absorbs junction round-off).
    """
    slack = 1e-9 * r
    if r < orbit.periapsis_radius - slack or r > orbit.apoapsis_radius + slack:
        raise RadiusOutsideOrbit(
            f"radius {r} outside [{orbit.periapsis_radius}, {orbit.apoapsis_radius}]"
        )
    return math.sqrt(max(grav.mu * (2.0 / r - 1.0 / orbit.a), 0.0))


def state_from_elements(pos: OrbitPosition, grav: Gravity = EARTH) -> PlanarState:
    """Inertial position/velocity of a point on an orbit, prograde motion."""
    orbit, theta = pos.orbit, pos.theta
    nu = theta + orbit.omega
    r = radius_at(orbit, theta)
    h = math.sqrt(grav.mu * orbit.semi_latus_rectum)
    v_radial = grav.mu / h * orbit.e * math.sin(nu)
    v_transverse = h / r
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    r_hat = np.array([cos_t, sin_t])
    t_hat = np.array([-sin_t, cos_t])
    return PlanarState(r * r_hat, v_radial * r_hat + v_transverse * t_hat)


def elements_from_state(state: PlanarState, grav: Gravity = EARTH) -> OrbitPosition:
    """Recover (a, e, omega, theta) from an inertial planar state.

    The apse-line branch is fixed by the sign of the radial velocity:
    true anomaly lies in (0, pi) exactly when the craft climbs away from
    perigee. Eccentricities below 1e-12 are treated as circular and get
    omega = 0.

    Raises:
        DegenerateOrbit: Near-zero or retrograde angular momentum.
        HyperbolicOrParabolic: The state is not on a closed ellipse.
    """
    pos, vel = state.position, state.velocity
    r = float(np.linalg.norm(pos))
    v = float(np.linalg.norm(vel))
    h_z = float(pos[0] * vel[1] - pos[1] * vel[0])
    if abs(h_z) < 1e-9 * r * v:
        raise DegenerateOrbit("angular momentum is (near) zero: motion is radial")
    if h_z < 0.0:
        raise DegenerateOrbit("retrograde state; only prograde motion is supported")

    r_hat = pos / r
    v_hat = vel / v
    ecc_vec = (r * v * v / grav.mu) * (r_hat - float(np.dot(r_hat, v_hat)) * v_hat) - r_hat
    e = float(np.linalg.norm(ecc_vec))
    if e >= 1.0:
        raise HyperbolicOrParabolic(f"eccentricity {e} >= 1")
    a = h_z * h_z / (grav.mu * (1.0 - e * e))

    theta = wrap_angle(math.atan2(float(r_hat[1]), float(r_hat[0])))
    if e < CIRCULAR_ECC:
        return OrbitPosition(PlanarOrbit(a, e, 0.0), theta)

    # true anomaly from cos (conic equation) and sin (radial velocity);
    # the atan2 keeps apsis neighborhoods well conditioned and encodes the
    # branch rule: climbing away from perigee puts nu in (0, pi)
    cos_nu = (a * (1.0 - e * e) / r - 1.0) / e
    v_radial = float(np.dot(pos, vel)) / r
    sin_nu = v_radial * h_z / (grav.mu * e)
    nu = math.atan2(sin_nu, cos_nu)
    omega = wrap_angle(nu - theta)
    return OrbitPosition(PlanarOrbit(a, e, omega), theta)


def _mean_anomaly(e: float, nu: float) -> float:
    """Mean anomaly for true anomaly nu, unwrapped over revolutions."""
    k, frac = divmod(nu, TWO_PI)
    ecc_anom = 2.0 * math.atan2(
        math.sqrt(1.0 - e) * math.sin(frac / 2.0),
        math.sqrt(1.0 + e) * math.cos(frac / 2.0),
    )
    if ecc_anom < 0.0:
        ecc_anom += TWO_PI
    return k * TWO_PI + ecc_anom - e * math.sin(ecc_anom)


def time_of_flight(
    orbit: PlanarOrbit, theta_from: float, theta_to: float, grav: Gravity = EARTH
) -> float:
    """Prograde coast time from theta_from to theta_to (s).

    If theta_to does not already lie ahead of theta_from, whole turns are
    added, so equal angles give zero and theta_from + 2*pi gives one period.
    """
    nu_from = theta_from + orbit.omega
    nu_to = theta_to + orbit.omega
    while nu_to < nu_from:
        nu_to += TWO_PI
    n = math.sqrt(grav.mu / orbit.a**3)
    return (_mean_anomaly(orbit.e, nu_to) - _mean_anomaly(orbit.e, nu_from)) / n


def _orbits_identical(orbit_a: PlanarOrbit, orbit_b: PlanarOrbit) -> bool:
    if abs(orbit_a.a - orbit_b.a) > 1e-9 * max(orbit_a.a, orbit_b.a):
        return False
    if abs(orbit_a.e - orbit_b.e) > 1e-12:
        return False
    if orbit_a.is_circular() and orbit_b.is_circular():
        return True
    return abs(shortest_arc(orbit_a.omega, orbit_b.omega)) < 1e-12


_INTERSECTION_SCAN_POINTS = 3600
_INTERSECTION_BISECT_TOL = 1e-12  # rad
_INTERSECTION_RADIUS_TOL = 1e-9  # relative


def conic_intersections(orbit_a: PlanarOrbit, orbit_b: PlanarOrbit) -> list[float]:
    """Polar angles in [0, 2*pi) where the two conics share a radius.

    A dense scan of the radius difference followed by bisection; confocal
    conics intersect in at most two points, tangency counting once. A
    tangency (double root without sign change) is caught by refining local
    minima of the absolute difference.

    Raises:
        IdenticalOrbits: The orbits coincide within tolerance.
    """
    if _orbits_identical(orbit_a, orbit_b):
        raise IdenticalOrbits("orbits coincide; every point is an intersection")

    def diff(theta: float) -> float:
        return radius_at(orbit_a, theta) - radius_at(orbit_b, theta)

    step = TWO_PI / _INTERSECTION_SCAN_POINTS
    thetas = [k * step for k in range(_INTERSECTION_SCAN_POINTS)]
    values = [diff(t) for t in thetas]
    scale = max(orbit_a.apoapsis_radius, orbit_b.apoapsis_radius)

    roots: list[float] = []

    def bisect(lo: float, hi: float, f_lo: float) -> float:
        while hi - lo > _INTERSECTION_BISECT_TOL:
            mid = 0.5 * (lo + hi)
            f_mid = diff(mid)
            if f_mid == 0.0:
                return mid
            if (f_lo < 0.0) != (f_mid < 0.0):
                hi = mid
            else:
                lo, f_lo = mid, f_mid
        return 0.5 * (lo + hi)

    for k in range(_INTERSECTION_SCAN_POINTS):
        t0, d0 = thetas[k], values[k]
        t1 = t0 + step
        d1 = values[(k + 1) % _INTERSECTION_SCAN_POINTS]
        if d0 == 0.0:
            roots.append(t0)
        elif (d0 < 0.0) != (d1 < 0.0):
            roots.append(bisect(t0, t1, d0))

    # Tangency: a local minimum of |diff| that reaches zero without a sign
    # change. Only grid points already close to zero are worth refining.
    for k in range(_INTERSECTION_SCAN_POINTS):
        d_prev = abs(values[(k - 1) % _INTERSECTION_SCAN_POINTS])
        d_here = abs(values[k])
        d_next = abs(values[(k + 1) % _INTERSECTION_SCAN_POINTS])
        if d_here <= d_prev and d_here <= d_next and d_here < 1e-3 * scale:
            lo, hi = thetas[k] - step, thetas[k] + step
            while hi - lo > _INTERSECTION_BISECT_TOL:
                m1 = lo + (hi - lo) / 3.0
                m2 = hi - (hi - lo) / 3.0
                if abs(diff(m1)) <= abs(diff(m2)):
                    hi = m2
                else:
                    lo = m1
            cand = 0.5 * (lo + hi)
            if abs(diff(cand)) < _INTERSECTION_RADIUS_TOL * radius_at(orbit_a, cand):
                roots.append(wrap_angle(cand))

    # tangent contacts are resolvable only to about sqrt(machine eps), so
    # roots closer than 1e-6 rad are one geometric contact
    verified: list[float] = []
    for theta in sorted(wrap_angle(t) for t in roots):
        if verified and abs(shortest_arc(verified[-1], theta)) < 1e-6:
            continue
        if abs(diff(theta)) < _INTERSECTION_RADIUS_TOL * radius_at(orbit_a, theta):
            verified.append(theta)
    # wrap-around duplicate (root at ~0 and ~2*pi)
    if len(verified) > 1 and abs(shortest_arc(verified[-1], verified[0])) < 1e-6:
        verified.pop()
    return verified
