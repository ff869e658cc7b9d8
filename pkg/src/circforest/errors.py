"""Exception types raised by the library.

Each class carries an ``exit_code`` used by the command-line front end:
2 for bad input, 3 for numerical or factorization failure, 4 for an
internal inconsistency.
"""


class CircForestError(Exception):
    exit_code = 4


class InvalidInput(CircForestError, ValueError):
    exit_code = 2


class InvalidStepSet(InvalidInput):
    pass


class TooSmall(InvalidInput):
    pass


class CapExceeded(InvalidInput):
    pass


class IndexOutOfRange(InvalidInput, IndexError):
    pass


class NotMonicizable(InvalidInput):
    pass


class OnCircleRoot(InvalidInput):
    """A polynomial has a root on the unit circle where none is allowed."""


class PrecisionExhausted(CircForestError, ArithmeticError):
    exit_code = 3


class ToleranceNotReached(CircForestError, ArithmeticError):
    exit_code = 3


class FactorizationIncomplete(CircForestError, ArithmeticError):
    exit_code = 3


class InternalInconsistency(CircForestError, AssertionError):
    """Two exact computations that must agree did not."""

    exit_code = 4
