"""Exception types shared across the package."""


class DegeneracyError(ValueError):
    """Input violates general position (duplicate, collinear, on-vertex)."""


class HullError(ValueError):
    """Query point lies outside the convex hull of the sites."""


class ConsistencyError(ValueError):
    """A trace does not match the triangulation it is replayed against."""


class PathSearchError(RuntimeError):
    """No path found inside the search ellipse after all retries."""


class DivergenceError(RuntimeError):
    """A baseline walk exceeded its hop limit."""
