import math

import numpy as np
import pytest

from arctransfer import (
    AllGridPointsFailed,
    DegenerateGeometry,
    Gravity,
    LambertProblem,
    OrbitPosition,
    PlanarOrbit,
    default_theta_grid,
    default_tof_grid,
    elements_from_state,
    lambert_scenario_a,
    lambert_scenario_b,
    lambert_solve,
    state_from_elements,
)
from arctransfer.conics import PlanarState

from conftest import propagate_state

MU = 398600.4418
GRAV = Gravity(MU)


def quarter_circle_problem(tof_scale=1.0):
    r = 7000.0
    period = 2.0 * math.pi * math.sqrt(r**3 / MU)
    return LambertProblem(
        r_start=[r, 0.0],
        r_end=[0.0, r],
        tof=tof_scale * period / 4.0,
        grav=GRAV,
    )


class TestLambertSolve:
    def test_coasting_circle(self):
        problem = quarter_circle_problem()
        solution = lambert_solve(problem)
        v = math.sqrt(MU / 7000.0)
        assert float(np.linalg.norm(solution.v_start)) == pytest.approx(v, rel=1e-9)
        assert float(np.linalg.norm(solution.v_end)) == pytest.approx(v, rel=1e-9)
        assert solution.transfer_orbit.e == pytest.approx(0.0, abs=1e-9)

    def test_fast_transfer_is_eccentric(self):
        problem = quarter_circle_problem(tof_scale=0.8)
        solution = lambert_solve(problem)
        assert solution.transfer_orbit.e > 0.05

    def test_below_parabolic_limit_rejected(self):
        # an eighth of the circular period over a quarter turn is faster
        # than the parabolic boundary
        from arctransfer import HyperbolicOrParabolic

        with pytest.raises(HyperbolicOrParabolic):
            lambert_solve(quarter_circle_problem(tof_scale=0.5))

    @pytest.mark.parametrize("tof_scale", [0.8, 1.0, 1.7, 2.5])
    def test_forward_propagation_reaches_endpoint(self, tof_scale):
        problem = quarter_circle_problem(tof_scale)
        solution = lambert_solve(problem)
        state = PlanarState(problem.r_start, solution.v_start)
        arrived = propagate_state(state, problem.tof, GRAV)
        assert arrived.position == pytest.approx(problem.r_end, abs=1e-4)

    def test_swapped_endpoints_still_prograde(self):
        problem = quarter_circle_problem()
        swapped = LambertProblem(problem.r_end, problem.r_start, problem.tof, GRAV)
        solution = lambert_solve(swapped)
        h = (
            swapped.r_start[0] * solution.v_start[1]
            - swapped.r_start[1] * solution.v_start[0]
        )
        assert h > 0.0  # no retrograde arcs; the long way around is used

    def test_collinear_endpoints_rejected(self):
        with pytest.raises(DegenerateGeometry):
            lambert_solve(
                LambertProblem([7000.0, 0.0], [-8000.0, 0.0], 1800.0, GRAV)
            )

    def test_departure_elements_reproduce_velocity(self):
        problem = quarter_circle_problem(0.7)
        solution = lambert_solve(problem)
        pos = elements_from_state(PlanarState(problem.r_start, solution.v_start), GRAV)
        again = state_from_elements(pos, GRAV)
        assert again.velocity == pytest.approx(solution.v_start, abs=1e-9)


class TestScenarioSearches:
    def test_single_point_grid(self, case1):
        grid = np.array([3000.0])
        optima = lambert_scenario_a(case1, grid)
        assert optima.best_ce.tof == 3000.0
        assert optima.best_mi.tof == 3000.0

    def test_scenario_b_contains_scenario_a(self, case1):
        tofs = default_tof_grid(case1.initial, case1.grav, points=60)
        thetas = np.sort(
            np.concatenate([default_theta_grid(36), [case1.theta_last]])
        )
        a = lambert_scenario_a(case1, tofs)
        b = lambert_scenario_b(case1, tofs, thetas, vary="arrival")
        assert b.best_ce.j_c <= a.best_ce.j_c + 1e-12
        assert b.best_mi.j_m <= a.best_mi.j_m + 1e-12

    def test_free_departure_contains_scenario_a(self, case1):
        tofs = default_tof_grid(case1.initial, case1.grav, points=60)
        thetas = np.sort(
            np.concatenate([default_theta_grid(36), [case1.theta_first]])
        )
        b = lambert_scenario_b(case1, tofs, thetas, vary="departure")
        a = lambert_scenario_a(case1, tofs)
        assert b.best_ce.j_c <= a.best_ce.j_c + 1e-12

    def test_all_hyperbolic_grid_fails(self, case1):
        # times far too short for any closed transfer
        with pytest.raises(AllGridPointsFailed):
            lambert_scenario_a(case1, np.array([1.0, 2.0]))

    def test_candidate_schedules_are_vector_burns(self, case1):
        optima = lambert_scenario_a(case1, default_tof_grid(case1.initial, points=80))
        for cand in (optima.best_ce, optima.best_mi):
            assert len(cand.schedule.impulses) == 2
            assert not cand.schedule.impulses[0].tangential
            assert cand.schedule.total_time == cand.tof

    def test_invalid_vary_rejected(self, case1):
        with pytest.raises(ValueError):
            lambert_scenario_b(case1, vary="sideways")
