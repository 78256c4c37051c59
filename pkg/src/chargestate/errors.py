"""Exception types shared across the package."""


class ChargeStateError(Exception):
    """Base class for all package-specific errors."""


class SpecParseError(ChargeStateError, ValueError):
    """A nonlinearity spec string does not match the grammar."""

    def __init__(self, token, message=None):
        self.token = token
        super().__init__(message or f"unrecognized nonlinearity spec token: {token!r}")


class ParameterRangeError(ChargeStateError, ValueError):
    """A nonlinearity parameter lies outside its admissible range."""


class PreconditionError(ChargeStateError, ValueError):
    """An operation was called with arguments violating its preconditions."""


class ZeroDenominatorError(ChargeStateError, ArithmeticError):
    """The recursion denominator vanished at some ladder index."""

    def __init__(self, index):
        self.index = index
        super().__init__(f"vanishing recursion denominator at ladder index {index}")


class ContinuedFractionPoleError(ChargeStateError, ArithmeticError):
    """An intermediate continued-fraction denominator was exactly zero."""

    def __init__(self, depth):
        self.depth = depth
        super().__init__(f"continued fraction hit a pole at depth {depth}")


class DegenerateStateError(ChargeStateError, ArithmeticError):
    """Every raw coefficient vanished; the state cannot be normalized."""


class LadderOverflowError(ChargeStateError, ArithmeticError):
    """A tridiagonal matrix element overflowed double precision."""

    def __init__(self, index):
        self.index = index
        super().__init__(f"ladder matrix element overflowed at index {index}; reduce n_max")
