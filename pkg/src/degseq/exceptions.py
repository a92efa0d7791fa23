class DegseqError(Exception):
    """Base class for all errors raised by degseq."""


class InfeasibleDegreesError(DegseqError, ValueError):
    """Degree targets for which the likelihood equations have no finite solution
    and the fixed-point map is undefined (a zero degree, or a degree above n - 1)."""


class NotInteriorError(DegseqError, ValueError):
    """A degree function outside the interior of the set of scaling limits."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class FitDivergedError(DegseqError, RuntimeError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class UnsupportedMotifError(DegseqError, ValueError):
    pass


class BudgetExceededError(DegseqError, RuntimeError):
    """Raised when a grid integral would cost more than the configured budget.

    Lower the grid size (``grid=``) or raise ``budget``.
    """


class ParseError(DegseqError, ValueError):
    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
        self.path = path
        self.line = line
