"""Exception types shared across the package."""


class BlochSepError(Exception):
    """Base class for errors raised by this package."""


class InvalidStateError(BlochSepError, ValueError):
    """A density matrix or serialized state failed validation.

    The message names the first violated requirement.
    """


class NumericIntegrityError(BlochSepError, ArithmeticError):
    """A quantity that must be real carried an imaginary residue above
    tolerance, or a computation produced non-finite values."""


class CriterionUnavailableError(BlochSepError, RuntimeError):
    """A test or construction does not apply to the given state, e.g. the
    sufficiency sum exceeds one or a required orthogonal decomposition of a
    correlation tensor does not exist."""
