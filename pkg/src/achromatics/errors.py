"""Exception types shared across the package."""


class OpticsError(Exception):
    """Base class for every error raised by achromatics."""


class DegenerateReference(OpticsError, ValueError):
    """A dispersion law anchored to a medium whose mean ratio is exactly 1."""


class OutOfDomain(OpticsError, ValueError):
    """An argument lies outside the domain of a transcendental formula."""


class MissingLineData(OpticsError, LookupError):
    """No measured value and no law reference exists for a spectral line."""


class AfocalOrConjugateAtInfinity(OpticsError, ZeroDivisionError):
    """The image lies at infinity (zero net vergence after the system)."""

    def __init__(self, message, power=None):
        super().__init__(message)
        self.power = power


class DegenerateLaw(OpticsError, ArithmeticError):
    """The dispersion law admits no achromat of nonzero power."""

    def __init__(self, message, determinant=None):
        super().__init__(message)
        self.determinant = determinant


class DegeneracyViolation(OpticsError, AssertionError):
    """An achromatic sample had nonzero power."""

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample


class NotApplicable(OpticsError, ValueError):
    """A derived quantity is undefined for the given input."""


class RayTraceError(OpticsError):
    """A ray failed at a surface.

    Attributes:
        status: one of ``missed_surface``, ``total_internal_reflection``
            or ``aperture_clipped``.
        surface: zero-based index of the offending surface, if known.
    """

    def __init__(self, status, message="", surface=None):
        super().__init__(message or status)
        self.status = status
        self.surface = surface


class PrescriptionError(OpticsError, ValueError):
    """A prescription document failed to parse or validate."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
