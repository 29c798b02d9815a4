"""Exception types shared across the package."""


class WrapmapError(Exception):
    """Base class for all domain errors raised by this package."""


class AntipodalPairError(WrapmapError):
    """Raised when an operation needs a unique great circle but the inputs
    are (nearly) antipodal or coincident, so the path is undefined."""


class DegeneratePolygonError(WrapmapError):
    """Raised for spherical polygons with fewer than 3 usable vertices or
    coincident/antipodal consecutive vertices."""


class OutsideDomainError(WrapmapError):
    """Raised when a screen point falls outside a projection's outline."""


class DisconnectedGraphError(WrapmapError):
    """Raised when an operation requires a connected graph."""


class UnreachableError(WrapmapError):
    """Raised when no path exists between two queried nodes."""


class SpecInfeasibleError(WrapmapError):
    """Raised when a generator cannot satisfy its constraints after the
    allowed number of rejection rounds."""


class InconsistentSceneError(WrapmapError):
    """Raised when render content does not match the scene geometry."""
