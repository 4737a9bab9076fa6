"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: input problems -> 2, geometric
violations -> 3, solvability failures -> 4.
"""


class PertinvError(Exception):
    pass


class InputError(PertinvError):
    """Malformed files, bad matrices, invalid construction data."""


class GeometryError(PertinvError):
    """Geometric preconditions violated (genericity, disjointness, ...)."""


class NonGenericError(GeometryError):
    def __init__(self, message, point=None):
        if point is not None:
            message = "%s at (%s, %s)" % (message, point[0], point[1])
        super().__init__(message)
        self.point = point


class PointOnCurveError(GeometryError):
    pass


class CurvesTooCloseError(GeometryError):
    pass


class RoundingDefectError(GeometryError):
    """A float computation did not resolve to an integer within tolerance."""


class ConsistencyError(PertinvError):
    """Solvability obstruction: a right-hand side fell outside the image
    of the linear part, or a solvability hypothesis failed."""

    def __init__(self, message, order=None):
        super().__init__(message)
        self.order = order


class InternalConsistencyError(PertinvError):
    """Two methods that must agree did not; indicates a broken build."""
