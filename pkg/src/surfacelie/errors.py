"""Exception types raised across the package."""


class SurfaceLieError(Exception):
    """Base class for all errors raised by surfacelie."""


class NotLie(SurfaceLieError):
    """A homogeneous polynomial failed the Dynkin primitivity test."""


class DegreeOverflow(SurfaceLieError):
    """A result would exceed the configured degree cap."""


class TrivialWithinCap(SurfaceLieError, ValueError):
    """A word has no nonzero Magnus part up to the degree cap."""


class TorsionFound(SurfaceLieError):
    """A relation lattice turned out not to be saturated."""


class NotTorelliModN(SurfaceLieError):
    """An endomorphism does not act trivially on the graded pieces required."""


class LiftDegreeError(SurfaceLieError):
    """phi(u) u^-1 has lower filtration degree than expected."""


class NotTorelli(SurfaceLieError):
    """Validation of an endomorphism as a Torelli element failed."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class NotInImage(SurfaceLieError):
    """The Magnus tensor does not factor through the map f."""


class IdentityFailed(SurfaceLieError):
    pass


class ExactnessFailed(SurfaceLieError):
    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage


class NotAUnit(SurfaceLieError, ZeroDivisionError):
    pass


class TooLarge(SurfaceLieError):
    pass


class ParseError(SurfaceLieError, ValueError):
    pass
