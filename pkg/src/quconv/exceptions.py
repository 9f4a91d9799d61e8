"""Exception hierarchy for quconv."""


class QuconvError(Exception):
    """Base class for all errors raised by this package."""


class ZeroInverse(QuconvError, ZeroDivisionError):
    pass


class DimensionMismatch(QuconvError, ValueError):
    pass


class ShapeMismatch(DimensionMismatch):
    pass


class Singular(QuconvError, ValueError):
    pass


class ScaleGuard(QuconvError, ValueError):
    """A computation would exceed the configured desk-scale limits."""


class IndexOutOfRange(QuconvError, IndexError):
    pass


class InvalidEncoder(QuconvError, ValueError):
    pass


class ParseError(QuconvError, ValueError):
    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.line = line
        self.field = field


class ValidationError(InvalidEncoder):
    pass


class EnumerationBudgetExceeded(QuconvError, RuntimeError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class MaxStepsExceeded(QuconvError, RuntimeError):
    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class InvalidSequence(QuconvError, ValueError):
    pass
