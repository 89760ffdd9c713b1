"""Exception types shared across the package."""


class LindbladError(Exception):
    """Base class for all errors raised by this package."""


class ExprSyntaxError(LindbladError, ValueError):
    """Rate-expression text does not conform to the grammar.

    Carries the character position of the failure and the tokens that
    would have been accepted there.
    """

    def __init__(self, message, position, expected=()):
        super().__init__(f"{message} at position {position}"
                         + (f" (expected {', '.join(expected)})" if expected else ""))
        self.position = position
        self.expected = tuple(expected)


class UnboundParameterError(LindbladError, ValueError):
    """A name in a rate expression is neither `t` nor a supplied parameter."""

    def __init__(self, name):
        super().__init__(f"unbound parameter {name!r}")
        self.name = name


class NonFiniteError(LindbladError, ArithmeticError):
    """A numeric evaluation produced inf or NaN (overflow, division by zero)."""


class DimensionMismatchError(LindbladError, ValueError):
    """Matrix or vector shapes are incompatible with the requested operation."""


class UnknownModelError(LindbladError, ValueError):
    """Requested built-in model name is not registered."""


class NotADensityMatrixError(LindbladError, ValueError):
    """Input fails a density-matrix invariant; `reason` names the one that failed."""

    def __init__(self, reason):
        super().__init__(f"not a density matrix: {reason}")
        self.reason = reason


class GridMismatchError(LindbladError, ValueError):
    """Two trajectories do not share the same time grid."""


class StepSizeUnderflowError(LindbladError, RuntimeError):
    """The adaptive ODE integrator failed to reach the requested tolerance."""


class IndexOutOfRangeError(LindbladError, IndexError):
    """A level index lies outside 1..d."""


class ModelFileError(LindbladError, ValueError):
    """A model file does not conform to the documented JSON schema."""
