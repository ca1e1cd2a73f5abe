"""Exception hierarchy.

Precondition failures carry the name of the invariant they violate so the
CLI can report it verbatim.
"""


class StargebraError(Exception):
    """Base class for every error raised by the package."""


class PreconditionError(StargebraError, ValueError):
    """An input does not satisfy the precondition of an operation."""

    def __init__(self, invariant, message=None):
        self.invariant = invariant
        super().__init__(f"{invariant}: {message}" if message else invariant)


class DimensionMismatchError(PreconditionError):
    pass


class NotHermitianError(PreconditionError):
    pass


class NotNormalError(PreconditionError):
    pass


class NotPositiveError(PreconditionError):
    pass


class NotCommutativeError(PreconditionError):
    pass


class NotInvertibleError(PreconditionError):
    pass


class PoleOnSpectrumError(PreconditionError):
    pass


class InvalidGroupError(PreconditionError):
    pass


class InvalidResolutionError(PreconditionError):
    pass


class DegenerateRepresentationError(PreconditionError):
    """The representation has a common null space.

    ``null_space`` holds an orthonormal basis of it as columns.
    """

    def __init__(self, invariant, message=None, null_space=None):
        super().__init__(invariant, message)
        self.null_space = null_space


class NotCyclicError(PreconditionError):
    pass


class NumericalError(StargebraError, ArithmeticError):
    """A computation failed to converge or left a residual beyond tolerance."""
