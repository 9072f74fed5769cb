"""Small-variation smoothness constraints and continuous eccentricity decay.

Linearizing the junction conditions between two neighboring arcs whose
elements differ by (da, de, dw) gives two constraints at the join angle:

    e [e + cos(theta + w)] dw + sin(theta + w) de = 0
    e sin(theta + w) dw - [(1 + e^2) cos(theta + w) + 2 e] / (1 - e^2) de
        + [1 + e cos(theta + w)] / a * da = 0

Read with d/dtheta in place of the differences they constrain the element
rates of a tangential continuous-thrust trajectory. Given a prescribed
de/dtheta the first equation yields dw/dtheta and the second da/dtheta.

The dw equation blows up where e + cos(theta + w) approaches zero; a
trajectory steered into that manifold picks up unbounded rate spikes, so
long propagations report element histories only in the quadrature sense.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .conics import PlanarOrbit, radius_at, wrap_angle
from .errors import CircularSingularity

# propagation stops once the profile eccentricity drops below this
ECC_FLOOR = 1e-6
# |e (e + cos(theta+w))| below this is treated as a true division blowup
_SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class ElementRates:
    """Element derivatives with respect to polar angle at one point."""

    d_a: float  # km per rad
    d_e: float  # 1 per rad
    d_omega: float  # rad per rad


@dataclass(frozen=True)
class DecayProfile:
    """Exponentially decaying eccentricity law e(theta) = e0 exp(-alpha theta)."""

    e0: float
    alpha: float

    def __post_init__(self) -> None:
        if not 0.0 < self.e0 < 1.0:
            raise ValueError(f"e0 must be in (0, 1), got {self.e0}")
        if self.alpha < 0.0:
            raise ValueError(f"alpha must be nonnegative, got {self.alpha}")

    def eccentricity(self, theta: float) -> float:
        return self.e0 * math.exp(-self.alpha * theta)

    def rate(self, theta: float) -> float:
        return -self.alpha * self.e0 * math.exp(-self.alpha * theta)


def rates_from_de(orbit: PlanarOrbit, theta: float, de_dtheta: float) -> ElementRates:
    """Element rates keeping the trajectory smooth for a given de/dtheta.

    Raises:
        CircularSingularity: e (e + cos(theta + omega)) vanishes, so no
            finite dw/dtheta satisfies the constraint.
    """
    a, e, w = orbit.a, orbit.e, orbit.omega
    u = theta + w
    coeff = e * (e + math.cos(u))
    if abs(coeff) < _SINGULAR_TOL:
        raise CircularSingularity(
            f"constraint coefficient e(e + cos(theta+omega)) = {coeff:.3e} vanishes"
        )
    d_omega = -math.sin(u) * de_dtheta / coeff
    d_a = (
        a
        * (
            ((1.0 + e * e) * math.cos(u) + 2.0 * e) / (1.0 - e * e) * de_dtheta
            - e * math.sin(u) * d_omega
        )
        / (1.0 + e * math.cos(u))
    )
    return ElementRates(d_a=d_a, d_e=de_dtheta, d_omega=d_omega)


@dataclass(frozen=True, eq=False)
class DecayHistory:
    """Sampled (theta, a, e, omega, r) along a decay propagation."""

    theta: np.ndarray
    a: np.ndarray
    e: np.ndarray
    omega: np.ndarray
    r: np.ndarray
    stopped_early: bool

    def __len__(self) -> int:
        return self.theta.size


def propagate_decay(
    initial: PlanarOrbit,
    profile: DecayProfile,
    theta_span: float,
    step: float = 0.001,
) -> DecayHistory:
    """Integrate (a, omega) over polar angle under the decay profile.

    Classical fixed-step fourth-order Runge-Kutta; the eccentricity
    follows the analytic profile exactly. Stops early (flagged) once the
    profile eccentricity falls below 1e-6.

    Raises:
        ValueError: initial.e does not match profile.e0, or span/step bad.
        CircularSingularity: Propagated from the rate evaluation.
    """
    if abs(initial.e - profile.e0) > 1e-12:
        raise ValueError(
            f"initial eccentricity {initial.e} does not match profile e0 {profile.e0}"
        )
    if theta_span <= 0.0 or step <= 0.0:
        raise ValueError("span and step must be positive")

    n_full, remainder = divmod(theta_span, step)
    sizes = [step] * int(n_full)
    if remainder > 1e-12 * theta_span:
        sizes.append(remainder)
    thetas = [0.0]
    a_hist = [initial.a]
    e_hist = [profile.e0]
    w_hist = [initial.omega]
    stopped = False

    def deriv(theta: float, a: float, w: float) -> tuple[float, float]:
        e = profile.eccentricity(theta)
        rates = rates_from_de(PlanarOrbit(a, e, w), theta, profile.rate(theta))
        return rates.d_a, rates.d_omega

    a, w = initial.a, initial.omega
    theta = 0.0
    for h in sizes:
        if profile.eccentricity(theta + h) < ECC_FLOOR:
            stopped = True
            break
        k1a, k1w = deriv(theta, a, w)
        k2a, k2w = deriv(theta + 0.5 * h, a + 0.5 * h * k1a, w + 0.5 * h * k1w)
        k3a, k3w = deriv(theta + 0.5 * h, a + 0.5 * h * k2a, w + 0.5 * h * k2w)
        k4a, k4w = deriv(theta + h, a + h * k3a, w + h * k3w)
        a += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
        theta += h
        thetas.append(theta)
        a_hist.append(a)
        e_hist.append(profile.eccentricity(theta))
        w_hist.append(w)

    theta_arr = np.array(thetas)
    a_arr = np.array(a_hist)
    e_arr = np.array(e_hist)
    w_arr = np.array(w_hist)
    r_arr = a_arr * (1.0 - e_arr**2) / (1.0 + e_arr * np.cos(theta_arr + w_arr))
    return DecayHistory(theta_arr, a_arr, e_arr, w_arr, r_arr, stopped)


def history_to_csv(history: DecayHistory) -> str:
    """History as CSV text (theta_rad, a_km, e, omega_rad, r_km)."""
    lines = ["theta_rad,a_km,e,omega_rad,r_km"]
    for k in range(len(history)):
        lines.append(
            ",".join(
                format(float(v), ".6g")
                for v in (
                    history.theta[k],
                    history.a[k],
                    history.e[k],
                    history.omega[k],
                    history.r[k],
                )
            )
        )
    return "\n".join(lines) + "\n"
