"""Exception types raised by the library."""


class WlmfError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(WlmfError, ValueError):
    """Operand shapes are incompatible."""


class EmptyInputError(WlmfError, ValueError):
    """An input that must be nonempty was empty."""


class NotHermitianError(WlmfError, ValueError):
    """A matrix required to be Hermitian was not."""


class NotSymmetricError(WlmfError, ValueError):
    """A matrix required to be complex symmetric was not."""


class NotPositiveDefiniteError(WlmfError, ValueError):
    """A matrix required to be positive definite was not."""


class InvalidImproprietyError(WlmfError, ValueError):
    """A correlation coefficient left the admissible range."""


class InsufficientSamplesError(WlmfError, ValueError):
    """Too few samples for the requested estimate or window length."""


class SingularAtOneError(WlmfError, ValueError):
    """A circularity quotient reached one, where the gain expression blows up."""


class DegenerateWindowError(WlmfError, ValueError):
    """A signal window produced a gain too small to normalize against."""


class DivergenceDetectedError(WlmfError, ArithmeticError):
    """Training produced a non-finite loss."""


class NumericalConsistencyError(WlmfError, ArithmeticError):
    """Two redundant computations of the same quantity disagreed."""
