"""Exception types shared across the package.

Each class maps onto a stable CLI exit code.
"""


class QcorrError(Exception):
    exit_code = 1


class ParseError(QcorrError, ValueError):
    """Malformed ket expression or state specification."""

    exit_code = 2

    def __init__(self, message, text=None, position=None):
        self.text = text
        self.position = position
        if text is not None and position is not None:
            message = f"{message} at position {position}\n  {text}\n  {' ' * position}^"
        super().__init__(message)


class ShapeError(QcorrError, ValueError):
    """Inconsistent dimensions, registers or site subsets."""

    exit_code = 3


class NumericError(QcorrError, ArithmeticError):
    """A computation produced a value outside its contract (e.g. complex expectation)."""

    exit_code = 4
