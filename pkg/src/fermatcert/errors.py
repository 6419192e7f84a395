"""Exception hierarchy shared by every module of the package."""


class FermatCertError(Exception):
    """Base class for all errors raised by fermatcert."""


class DomainError(FermatCertError, ValueError):
    """An input lies outside the domain of an operation."""


class NumericError(FermatCertError, ArithmeticError):
    """An iterative numerical method failed to converge.

    ``residual`` carries the last residual seen, when there is one.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ResourceError(FermatCertError):
    """A configured size cap (terms, nodes) was exceeded."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class DegenerateCurveError(FermatCertError):
    """The singular locus of a plane curve is positive dimensional."""


class ContourError(FermatCertError):
    """A zero of the integrand lies on (or too close to) an integration contour."""

    def __init__(self, message, radius=None, distance=None):
        super().__init__(message)
        self.radius = radius
        self.distance = distance


class UnresolvedCaseError(FermatCertError):
    """The Borel engine could not reduce a case's constraint system."""

    def __init__(self, message, label=None, partial=None):
        super().__init__(message)
        self.label = label
        self.partial = partial


class ConsistencyError(FermatCertError, AssertionError):
    """Two independent computation routes disagreed."""
