import math

import numpy as np
import pytest

from arctransfer import (
    AdjustableSet,
    DimensionMismatch,
    Gravity,
    IdenticalOrbits,
    ManeuverScenario,
    OrbitPosition,
    PlanarOrbit,
    assemble_system,
    cost_report,
    impulse_schedule,
    radius_at,
    radius_match_residual,
    slope_at,
    slope_match_residual,
    solve_chain,
    state_from_elements,
    two_impulse_chains,
    two_impulse_perigee,
)
from arctransfer.chains import finite_difference_jacobian
from arctransfer.conics import wrap_angle

MU = 398600.4418
GRAV = Gravity(MU)


class TestResiduals:
    def test_identical_orbits_vanish(self):
        orbit = PlanarOrbit(9000.0, 0.3, 1.2)
        for theta in (0.0, 1.0, 4.0):
            assert slope_match_residual(orbit, orbit, theta) == pytest.approx(0.0, abs=1e-15)
            assert radius_match_residual(orbit, orbit, theta) == pytest.approx(0.0, abs=1e-9)

    def test_circular_pair_slope_always_matches(self):
        small = PlanarOrbit(7000.0, 0.0)
        large = PlanarOrbit(9000.0, 0.0)
        for theta in (0.0, 0.7, 3.3):
            assert slope_match_residual(small, large, theta) == 0.0
            # two circles differ in radius by a - a everywhere
            assert radius_match_residual(small, large, theta) == pytest.approx(
                7000.0 - 9000.0, rel=1e-12
            )

    def test_apogee_circle_tangency(self):
        ellipse = PlanarOrbit(10000.0, 0.5, 0.0)
        circle = PlanarOrbit(15000.0, 0.0)
        assert slope_match_residual(ellipse, circle, math.pi) == pytest.approx(
            0.0, abs=1e-12
        )
        # apogee radius equals the circle radius, so both conditions hold
        assert radius_match_residual(ellipse, circle, math.pi) == pytest.approx(
            0.0, abs=1e-9
        )

    def test_transfer_pair_radius_residual(self):
        # circle 7000 against the half-ellipse toward 14000 at the shared perigee
        circle = PlanarOrbit(7000.0, 0.0)
        transfer = PlanarOrbit(10500.0, 1.0 / 3.0, 0.0)
        assert radius_match_residual(circle, transfer, 0.0) == pytest.approx(0.0, abs=1e-9)


class TestAssembleSystem:
    def test_three_impulse_layout(self, case1):
        system = assemble_system(case1)
        assert system.n_equations == 6
        assert system.unknown_names == (
            ("a", 2),
            ("e", 2),
            ("a", 3),
            ("e", 3),
            ("omega", 3),
            ("theta", 2),
        )

    def test_adjustable_count_enforced(self):
        with pytest.raises(DimensionMismatch):
            ManeuverScenario(
                initial=PlanarOrbit(7000.0, 0.0),
                final=PlanarOrbit(14000.0, 0.0),
                theta_first=0.0,
                theta_last=math.pi,
                n_impulses=3,
                adjustables=AdjustableSet(),
            )

    def test_unknown_adjustable_id_rejected(self):
        with pytest.raises(ValueError):
            ManeuverScenario(
                initial=PlanarOrbit(7000.0, 0.0),
                final=PlanarOrbit(14000.0, 0.0),
                theta_first=0.0,
                theta_last=math.pi,
                n_impulses=3,
                adjustables=AdjustableSet((("omega1", 0.0),)),
            )

    def test_solved_chain_is_a_root(self, case1):
        system = assemble_system(with_omega2(case1, math.radians(5.0)))
        chain = solve_chain(with_omega2(case1, math.radians(5.0)))
        x = system.pack(chain)
        assert float(np.max(np.abs(system.residual(x) / system.row_scale))) < 1e-10

    def test_jacobian_matches_central_differences(self, case1):
        scenario = with_omega2(case1, math.radians(5.0))
        system = assemble_system(scenario)
        x = system.default_guess()
        jac = finite_difference_jacobian(system.residual, x)
        check = np.empty_like(jac)
        for j in range(x.size):
            h = 1e-7 * max(1.0, abs(x[j]))
            xp = x.copy()
            xm = x.copy()
            xp[j] += h
            xm[j] -= h
            check[:, j] = (system.residual(xp) - system.residual(xm)) / (2.0 * h)
        assert np.allclose(jac, check, rtol=1e-5, atol=1e-8)


def with_omega2(scenario, omega2_rad):
    return ManeuverScenario(
        initial=scenario.initial,
        final=scenario.final,
        theta_first=scenario.theta_first,
        theta_last=scenario.theta_last,
        n_impulses=scenario.n_impulses,
        adjustables=scenario.adjustables.replace("omega2", omega2_rad),
        grav=scenario.grav,
    )


def _smoothness_ok(chain, radius_tol=1e-6, slope_tol=1e-6):
    for k, theta in enumerate(chain.junctions):
        lo, hi = chain.orbits[k], chain.orbits[k + 1]
        if abs(radius_at(lo, theta) - radius_at(hi, theta)) > radius_tol:
            return False
        if abs(slope_at(lo, theta) - slope_at(hi, theta)) > slope_tol:
            return False
    return True


def _tangency_ok(chain, grav=GRAV, angle_tol=1e-9, dv_tol=1e-9):
    schedule = impulse_schedule(chain)
    for k, theta in enumerate(chain.junctions):
        before = state_from_elements(OrbitPosition(chain.orbits[k], theta), grav)
        after = state_from_elements(OrbitPosition(chain.orbits[k + 1], theta), grav)
        v1, v2 = before.velocity, after.velocity
        cross = abs(v1[0] * v2[1] - v1[1] * v2[0])
        angle = math.asin(
            min(1.0, cross / (np.linalg.norm(v1) * np.linalg.norm(v2)))
        )
        if angle > angle_tol:
            return False
        vector_dv = float(np.linalg.norm(v2 - v1))
        if abs(vector_dv - abs(schedule.impulses[k].dv)) > dv_tol:
            return False
    return True


class TestSolveChain:
    def test_circle_to_circle_gives_classic_transfer(self):
        scenario = ManeuverScenario(
            initial=PlanarOrbit(7000.0, 0.0),
            final=PlanarOrbit(14000.0, 0.0),
            theta_first=0.0,
            theta_last=math.pi,
            n_impulses=2,
        )
        chain = solve_chain(scenario)
        assert chain.orbits[1].e == pytest.approx(1.0 / 3.0, abs=1e-10)
        assert chain.orbits[1].a == pytest.approx(10500.0, rel=1e-10)

    def test_exact_guess_converges_immediately(self, case1):
        scenario = with_omega2(case1, math.radians(5.0))
        chain = solve_chain(scenario)
        system = assemble_system(scenario)
        again = solve_chain(scenario, guess=system.pack(chain))
        assert again.diagnostics.iterations <= 2
        assert again.diagnostics.relaxations == 0

    def test_solved_chain_is_smooth_and_tangent(self, case1):
        chain = solve_chain(with_omega2(case1, math.radians(5.0)))
        assert _smoothness_ok(chain)
        assert _tangency_ok(chain)

    def test_smoothness_across_omega2_values(self, case1):
        for omega2_deg in (0.0, 5.0, 150.0, 205.0, 290.0, 355.0):
            chain = solve_chain(with_omega2(case1, math.radians(omega2_deg)))
            assert _smoothness_ok(chain)
            assert _tangency_ok(chain)


class TestTwoImpulsePerigee:
    def test_case1_closed_form(self):
        # circular target: e2 = (a3 - rp) / (a3 + rp) = 6878 / 20634 = 1/3
        initial = PlanarOrbit(13756.0, 0.5, math.radians(10.0))
        final = PlanarOrbit(13756.0, 0.0, math.radians(60.0))
        chain = two_impulse_perigee(initial, final, GRAV)
        transfer = chain.orbits[1]
        assert transfer.e == pytest.approx(6878.0 / 20634.0, abs=1e-12)
        assert transfer.a == pytest.approx(10317.0, rel=1e-12)
        # departure at the perigee polar angle of the initial orbit
        assert chain.junctions[0] == pytest.approx(math.radians(350.0), abs=1e-12)
        report = cost_report(impulse_schedule(chain))
        # vis-viva oracle values
        assert report.j_c == pytest.approx(1.521020693795161, abs=1e-9)
        assert report.j_m == pytest.approx(0.9877953213503767, abs=1e-9)

    def test_elliptic_target_satisfies_junctions(self):
        initial = PlanarOrbit(6644.4, 0.01, math.radians(60.0))
        final = PlanarOrbit(26562.0, 0.74105, math.radians(30.0))
        chain = two_impulse_perigee(initial, final, GRAV)
        assert _smoothness_ok(chain)
        assert _tangency_ok(chain)
        assert chain.junctions[0] == pytest.approx(
            wrap_angle(-initial.omega), abs=1e-12
        )

    def test_inward_circular_target(self):
        initial = PlanarOrbit(13756.0, 0.2, 0.5)
        final = PlanarOrbit(9000.0, 0.0)
        chain = two_impulse_perigee(initial, final, GRAV)
        assert _smoothness_ok(chain)
        schedule = impulse_schedule(chain)
        assert schedule.impulses[0].dv < 0.0  # braking burn

    def test_identical_orbits_rejected(self):
        orbit = PlanarOrbit(9000.0, 0.1, 0.4)
        with pytest.raises(IdenticalOrbits):
            two_impulse_perigee(orbit, PlanarOrbit(9000.0, 0.1, 0.4), GRAV)


class TestImpulseSchedule:
    def test_transfer_between_circles(self):
        chain = solve_chain(
            ManeuverScenario(
                initial=PlanarOrbit(7000.0, 0.0),
                final=PlanarOrbit(14000.0, 0.0),
                theta_first=0.0,
                theta_last=math.pi,
                n_impulses=2,
            )
        )
        schedule = impulse_schedule(chain)
        # vis-viva oracle
        assert schedule.impulses[0].dv == pytest.approx(1.167378506618161, abs=1e-9)
        assert schedule.impulses[1].dv == pytest.approx(0.9791495542672495, abs=1e-9)
        report = cost_report(schedule)
        assert report.j_c == pytest.approx(2.1465280608854105, abs=1e-9)
        # transfer time is the half period of the connecting ellipse,
        # limited by the solver residual tolerance on a2
        assert schedule.total_time == pytest.approx(
            math.pi * math.sqrt(10500.0**3 / MU), rel=1e-7
        )

    def test_duplicate_orbit_zero_burn(self, case1):
        chains = two_impulse_chains(case1)
        first = [c for c in chains if c.orbits[0] == c.orbits[1]]
        assert first
        schedule = impulse_schedule(first[0])
        assert schedule.impulses[0].dv == pytest.approx(0.0, abs=1e-12)


class TestTwoImpulseChains:
    def test_case1_points(self, case1):
        chains = two_impulse_chains(case1)
        assert len(chains) == 2
        reports = [cost_report(impulse_schedule(c)) for c in chains]
        # the vanished-first member reproduces the family's best two-burn
        # transfer; values pinned by the solver itself are cross-checked
        # against the acceptance suite
        best = min(reports, key=lambda r: r.j_c)
        assert best.j_c < 1.6
        for chain in chains:
            assert _smoothness_ok(chain)
            assert _tangency_ok(chain)
            assert min(abs(b.dv) for b in impulse_schedule(chain).impulses) < 1e-4

    def test_points_are_degenerate_members(self, case1):
        for chain in two_impulse_chains(case1):
            assert chain.orbits[0] == chain.orbits[1] or chain.orbits[2] == chain.orbits[3]
