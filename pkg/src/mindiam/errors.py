"""Exception types raised across the package."""


class MindiamError(Exception):
    """Base class; ``code`` is the stable identifier reported by the CLI."""

    code = "Error"


class PreconditionError(MindiamError, ValueError):
    code = "PreconditionViolation"


class PolygonError(PreconditionError):
    """Invalid convex region; ``code`` is one of NotCCW, NotConvex, DuplicateVertex,
    TooManyVertices, NonFinite, EmptyRegion."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class HoleTopology(MindiamError):
    code = "HoleTopology"

    def __init__(self, message: str, pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.pair = pair


class OracleTooLarge(MindiamError):
    code = "OracleTooLarge"


class GridTooFine(MindiamError):
    code = "GridTooFine"


class IterationLimit(MindiamError):
    code = "IterationLimit"


class NotSeparable(MindiamError):
    code = "NotSeparable"


class RegionOutsideFocus(MindiamError):
    code = "RegionOutsideFocus"


class InstanceError(MindiamError):
    """Malformed instance file. ``code`` distinguishes the failure kind."""

    def __init__(self, code: str, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.code = code
        self.path = path
