"""Exception types shared across the package."""


class FracGeoError(Exception):
    """Base class for all errors raised by fracgeo."""


class UnboundedError(FracGeoError):
    """The half-space intersection is unbounded (normals do not positively span)."""


class EmptyBodyError(FracGeoError):
    """The half-space intersection has empty interior."""


class PointOutsideError(FracGeoError):
    """A point that must lie in the body violates a facet constraint."""


class PointNotOnBoundaryError(FracGeoError):
    """A point that must lie on the boundary is strictly interior or exterior."""


class InvalidSError(FracGeoError):
    """The fractional parameter s lies outside (0, 1)."""


class NotTangentError(FracGeoError):
    """A direction that must be tangent is not orthogonal to the normal."""


class DegenerateBodyError(FracGeoError):
    """Rejection sampling acceptance rate collapsed; body is numerically degenerate."""


class WulffDegenerateError(FracGeoError):
    """A perturbed support vector no longer generates a convex body."""


class InvalidTargetError(FracGeoError):
    """A target measure violates the solvability conditions."""


class StalledError(FracGeoError):
    """Descent could not find a decreasing step within the backtracking budget."""
