"""Exception types raised across the package."""


class NPSpecError(Exception):
    """Base class for every error raised by npspec."""


class ParameterError(NPSpecError, ValueError):
    """An argument is outside its admissible range."""


class DomainError(NPSpecError, ValueError):
    """A point lies outside the domain of the exterior map."""


class DegenerateBoundaryError(NPSpecError):
    """The boundary parametrization has a vanishing scale factor (cusp)."""


class InvalidMapError(NPSpecError):
    """The Laurent series does not define a valid Jordan domain."""


class ConsistencyError(NPSpecError):
    """An internal identity (symmetry, hermiticity) failed numerically."""


class ResonanceError(NPSpecError):
    """The finite-section system is singular at the requested lambda."""


class SingularTensorError(NPSpecError):
    """A tensor or matrix that must be inverted is singular."""


class DiluteRegimeError(NPSpecError, ValueError):
    """The inclusion is too large for the dilute expansion."""


class GeometryError(NPSpecError):
    """The inclusion does not fit strictly inside the periodic cell."""


class SolverError(NPSpecError):
    """An iterative solver failed to reach its residual target."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class CollarError(NPSpecError):
    """A field point is too close to the boundary for series evaluation."""
