"""Classical impulsive baselines: Hohmann, bi-elliptic, single impulse."""
from __future__ import annotations

import math

import numpy as np

from .chains import Impulse, ImpulseSchedule, TransferChain, verify_chain
from .conics import (
    EARTH,
    Gravity,
    PlanarOrbit,
    OrbitPosition,
    conic_intersections,
    radius_at,
    state_from_elements,
    time_of_flight,
    wrap_angle,
)
from .errors import IdenticalOrbits, InvalidIntermediate, NoIntersection


def hohmann(r1: float, r2: float, grav: Gravity = EARTH) -> TransferChain:
    """Two-impulse transfer between coplanar circular orbits.

    The transfer half-ellipse touches both circles on the apse line; the
    departure junction is placed at polar angle 0 and the arrival at pi.

    Raises:
        IdenticalOrbits: r1 == r2.
    """
    if r1 <= 0.0 or r2 <= 0.0:
        raise ValueError("radii must be positive")
    if r1 == r2:
        raise IdenticalOrbits("equal circular radii admit no transfer")
    a_t = 0.5 * (r1 + r2)
    e_t = abs(r2 - r1) / (r1 + r2)
    # perigee of the transfer sits at the smaller circle
    omega_t = 0.0 if r2 > r1 else math.pi
    chain = TransferChain(
        (PlanarOrbit(r1, 0.0), PlanarOrbit(a_t, e_t, omega_t), PlanarOrbit(r2, 0.0)),
        (0.0, math.pi),
        grav,
    )
    verify_chain(chain)
    return chain


def bi_elliptic(r1: float, r_mid: float, r2: float, grav: Gravity = EARTH) -> TransferChain:
    """Three-impulse transfer through an intermediate apse radius r_mid.

    Both interior junctions lie on the apse line through the focus
    (polar angles 0, pi, 0). r_mid = max(r1, r2) degenerates to a Hohmann
    chain with a zero third burn.

    Raises:
        InvalidIntermediate: r_mid below either terminal radius or equal
            to both (no elliptic arcs).
    """
    if min(r1, r_mid, r2) <= 0.0:
        raise ValueError("radii must be positive")
    if r_mid < max(r1, r2) or r_mid <= min(r1, r2):
        raise InvalidIntermediate(
            f"intermediate radius {r_mid} must reach past max(r1, r2) = {max(r1, r2)}"
        )
    first = PlanarOrbit(0.5 * (r1 + r_mid), (r_mid - r1) / (r_mid + r1), 0.0)
    if r_mid > r2:
        second = PlanarOrbit(0.5 * (r2 + r_mid), (r_mid - r2) / (r_mid + r2), 0.0)
    else:
        second = PlanarOrbit(r2, 0.0)
    chain = TransferChain(
        (PlanarOrbit(r1, 0.0), first, second, PlanarOrbit(r2, 0.0)),
        (0.0, math.pi, 0.0),
        grav,
    )
    verify_chain(chain)
    return chain


def single_impulse(
    initial: PlanarOrbit,
    final: PlanarOrbit,
    grav: Gravity = EARTH,
    theta_depart: float | None = None,
) -> list[ImpulseSchedule]:
    """One vector burn at each geometric intersection of the two orbits.

    The burn is the full velocity difference between the orbits at the
    intersection and is generally not tangential. When theta_depart is
    given, each schedule's time is the prograde coast on the initial orbit
    from that polar angle to the burn point; otherwise times are zero.

    Raises:
        NoIntersection: The orbits share no point.
    """
    crossings = conic_intersections(initial, final)
    if not crossings:
        raise NoIntersection("orbits do not intersect; one impulse cannot transfer")
    schedules = []
    for theta in crossings:
        v_before = state_from_elements(OrbitPosition(initial, theta), grav).velocity
        v_after = state_from_elements(OrbitPosition(final, theta), grav).velocity
        dv = float(np.linalg.norm(v_after - v_before))
        burn = Impulse(
            theta=wrap_angle(theta),
            radius=radius_at(initial, theta),
            dv=dv,
            tangential=False,
        )
        if theta_depart is None:
            coast = 0.0
        else:
            coast = time_of_flight(initial, theta_depart, theta, grav)
        schedules.append(
            ImpulseSchedule(impulses=(burn,), arc_times=(coast,), total_time=coast)
        )
    return schedules
