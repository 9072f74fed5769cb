"""Smooth multi-impulse coplanar orbit transfer design.

Transfers are chains of confocal elliptic arcs joined with matching
radius and tangent direction, so every burn is tangential. The package
also carries the classical baselines (Hohmann, bi-elliptic, single
impulse), a fixed-time two-point (Lambert) grid optimizer, a family sweep
over the interior perigee rotation, and a small-variation continuous
eccentricity-decay propagator.
"""
from .chains import (
    AdjustableSet,
    Impulse,
    ImpulseSchedule,
    ManeuverScenario,
    SolveDiagnostics,
    TransferChain,
    assemble_system,
    impulse_schedule,
    radius_match_residual,
    slope_match_residual,
    solve_chain,
    two_impulse_chains,
    two_impulse_perigee,
)
from .classical import bi_elliptic, hohmann, single_impulse
from .conics import (
    EARTH,
    MU_EARTH,
    Gravity,
    OrbitPosition,
    PlanarOrbit,
    PlanarState,
    conic_intersections,
    elements_from_state,
    radius_at,
    slope_at,
    speed_at,
    state_from_elements,
    time_of_flight,
    wrap_angle,
)
from .errors import (
    AllGridPointsFailed,
    ArcTransferError,
    CircularSingularity,
    DegenerateGeometry,
    DegenerateOrbit,
    DimensionMismatch,
    HyperbolicOrParabolic,
    IdenticalOrbits,
    InvalidIntermediate,
    NoConvergence,
    NoIntersection,
    NonEllipticSolution,
    ParseError,
    RadiusOutsideOrbit,
    SingularJacobian,
    SolveError,
)
from .lambert import (
    LambertCandidate,
    LambertOptima,
    LambertProblem,
    LambertSolution,
    default_theta_grid,
    default_tof_grid,
    lambert_scenario_a,
    lambert_scenario_b,
    lambert_solve,
)
from .optimize import (
    CostReport,
    SweepOptimum,
    SweepResult,
    SweepSample,
    TwoImpulsePoint,
    cost_ce,
    cost_mi,
    cost_report,
    sweep_omega2,
    sweep_to_csv,
)
from .variational import (
    DecayHistory,
    DecayProfile,
    ElementRates,
    history_to_csv,
    propagate_decay,
    rates_from_de,
)

__version__ = "0.1.0"
