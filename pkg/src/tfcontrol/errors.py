"""Exception types shared across the toolbox."""


class TemperedControlError(Exception):
    """Base class for every toolbox-specific failure."""


class InvalidParameter(TemperedControlError, ValueError):
    """A scalar or matrix argument violates its documented domain."""


class NonConvergence(TemperedControlError):
    """A series or iteration hit its term cap before the stopping rule fired."""


class GridTooCoarse(TemperedControlError, ValueError):
    """The sampling grid has too few nodes for the requested operator."""


class DimensionMismatch(TemperedControlError, ValueError):
    """Array shapes are inconsistent with the system dimensions."""


class AlphaOutOfRange(TemperedControlError, ValueError):
    """The fractional order is outside the range where the quantity exists."""


class QuadratureFailure(TemperedControlError):
    """A quadrature produced non-finite values."""


class SingularGramian(TemperedControlError):
    """The Gramian is numerically singular, so no steering control exists."""


class ContourFailure(TemperedControlError):
    """Inverse Laplace contour evaluation produced non-finite values."""


class AccuracyNotReached(TemperedControlError):
    """Two inverse Laplace contour resolutions disagree beyond tolerance."""


class SingularResolvent(TemperedControlError):
    """The frequency-domain resolvent is singular at a sample point."""


class SystemSpecError(TemperedControlError, ValueError):
    """A system description file failed validation."""
