import math

import numpy as np
import pytest

from arctransfer import (
    AdjustableSet,
    Gravity,
    ManeuverScenario,
    OrbitPosition,
    PlanarOrbit,
    elements_from_state,
    state_from_elements,
    time_of_flight,
)

MU = 398600.4418


@pytest.fixture
def grav():
    return Gravity(MU)


@pytest.fixture
def case1():
    """Eccentric LEO circularization scenario."""
    return ManeuverScenario(
        initial=PlanarOrbit(13756.0, 0.5, math.radians(10.0)),
        final=PlanarOrbit(13756.0, 0.0, math.radians(60.0)),
        theta_first=math.radians(270.0),
        theta_last=math.radians(30.0),
        n_impulses=3,
        adjustables=AdjustableSet((("omega2", 0.0),)),
    )


@pytest.fixture
def case2():
    """LEO to half-day high-eccentricity orbit scenario."""
    return ManeuverScenario(
        initial=PlanarOrbit(6644.4, 0.01, math.radians(60.0)),
        final=PlanarOrbit(26562.0, 0.74105, math.radians(30.0)),
        theta_first=math.radians(45.0),
        theta_last=math.radians(15.0),
        n_impulses=3,
        adjustables=AdjustableSet((("omega2", 0.0),)),
    )


def propagate_state(state, dt, grav):
    """Two-body propagation oracle built from element conversion and timing.

    Independent of the fixed-time arc solver: converts the state to
    elements, inverts the coast time for the downstream polar angle by
    bisection (time is monotone in angle), and converts back.
    """
    pos = elements_from_state(state, grav)
    orbit, theta0 = pos.orbit, pos.theta
    period = orbit.period(grav)
    revs, remainder = divmod(dt, period)
    lo, hi = theta0, theta0 + 2.0 * math.pi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if time_of_flight(orbit, theta0, mid, grav) < remainder:
            lo = mid
        else:
            hi = mid
    theta = 0.5 * (lo + hi)
    return state_from_elements(OrbitPosition(orbit, theta), grav)
