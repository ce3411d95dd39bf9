"""Exception types shared across the package."""


class GaloisPointsError(Exception):
    """Base class for all package errors."""


class FieldError(GaloisPointsError):
    """Invalid field construction or mismatched element owners."""


class SizeBoundError(GaloisPointsError):
    """A requested object exceeds the configured desk-scale bounds."""


class CurveError(GaloisPointsError):
    """Illegal curve parameters or points that violate curve equations."""


class WTableError(CurveError):
    """The auxiliary function table for the Ree family failed validation."""


class GroupError(GaloisPointsError):
    """Group construction or closure verification failed."""


class SeriesError(GaloisPointsError):
    """A truncated-series computation could not resolve at the allowed order."""


class MorphismError(GaloisPointsError):
    """Morphism construction or evaluation failed a precondition."""
