"""Exception types raised by the transfer design library."""


class ArcTransferError(Exception):
    """Base class for all library-specific errors."""


class DegenerateOrbit(ArcTransferError):
    """State has (near-)zero or retrograde angular momentum."""


class HyperbolicOrParabolic(ArcTransferError):
    """State or solution implies eccentricity >= 1; only ellipses are supported."""


class RadiusOutsideOrbit(ArcTransferError):
    """Requested radius lies outside the orbit's periapsis/apoapsis range."""


class IdenticalOrbits(ArcTransferError):
    """Two orbits coincide within tolerance where distinct orbits are required."""


class NoIntersection(ArcTransferError):
    """The two conics share no common point."""


class InvalidIntermediate(ArcTransferError):
    """Intermediate radius produces a non-elliptic or degenerate arc."""


class DimensionMismatch(ArcTransferError):
    """Unknown count does not match equation count for the junction system."""


class SingularJacobian(ArcTransferError):
    """Newton iteration hit a singular Jacobian (circular interior arc)."""


class NoConvergence(ArcTransferError):
    """Iterative solver failed to reach the requested tolerance."""


class NonEllipticSolution(ArcTransferError):
    """Solved chain contains an arc with e >= 1 or a <= 0."""


class DegenerateGeometry(ArcTransferError):
    """Boundary positions are collinear with the focus; transfer plane undefined."""


class AllGridPointsFailed(ArcTransferError):
    """No grid point of a search produced a valid transfer."""


class CircularSingularity(ArcTransferError):
    """Small-variation constraint is degenerate (e or e + cos(theta+omega) vanishes)."""


class ParseError(ArcTransferError):
    """Scenario file is malformed or violates the schema."""


class SolveError(ArcTransferError):
    """A solve step failed; wraps the underlying module error."""
