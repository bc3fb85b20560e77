"""Exception hierarchy.

Input problems derive from :class:`DomainError` (a ``ValueError``); failures
of the numerics on valid input derive from :class:`NumericalError`.
"""


class DomainError(ValueError):
    """Input violates a precondition (shape, range, symmetry, ...)."""


class DimensionError(DomainError):
    pass


class NumericalError(ArithmeticError):
    pass


class SingularMatrixError(NumericalError):
    """A zero pivot appeared during elimination."""

    def __init__(self, message, raw_cond=None, scaled_cond=None):
        super().__init__(message)
        self.raw_cond = raw_cond
        self.scaled_cond = scaled_cond


class DegenerateSystemError(NumericalError):
    """All cofactors of a homogeneous system vanish (rank deficiency)."""


class NoAffineSolutionError(NumericalError):
    """Homogeneous solution has zero homogeneous coordinate."""


class SingularColumnError(NumericalError):
    """A column is identically zero so it has no scale factor."""


class HilbertOverflowError(OverflowError):
    def __init__(self, exponent: int, base: float):
        super().__init__(f"{base!r}**{exponent} overflows float64")
        self.exponent = exponent
        self.base = base
