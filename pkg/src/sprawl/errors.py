"""Exception hierarchy shared by every module in the package."""


class SprawlError(Exception):
    """Base class for all package errors."""


class InvalidInput(SprawlError, ValueError):
    pass


class NotGenerating(InvalidInput):
    pass


class NotFullDimensional(InvalidInput):
    pass


class DegenerateFacet(SprawlError):
    pass


class DimensionMismatch(InvalidInput):
    pass


class SingularMatrix(InvalidInput):
    pass


class NotPlanar(InvalidInput):
    pass


class NotHexagon(InvalidInput):
    pass


class CutlineCrossing(SprawlError):
    """Two cutlines met inside the open parameter square."""


class UnsupportedParameter(InvalidInput):
    pass


class NoAsymptoticKnown(SprawlError):
    pass


class OriginNotInterior(InvalidInput):
    pass


class MemoryBudgetExceeded(SprawlError):
    def __init__(self, message, completed_radius):
        super().__init__(message)
        self.completed_radius = completed_radius
