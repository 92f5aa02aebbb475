class MinkowskiError(Exception):
    """Base class for every error raised by the package"""


class NormValidationError(MinkowskiError, ValueError):
    """A unit ball description failed validation (CLI exit status 2)"""


class DomainError(MinkowskiError, ValueError):
    """An operation was called outside its domain (CLI exit status 2)"""


class ZeroVectorError(DomainError):
    def __init__(self, message: str = "zero vector"):
        super().__init__(message)


class CollinearAxesError(DomainError):
    def __init__(self, message: str = "collinear axes"):
        super().__init__(message)


class DegeneratePairError(DomainError):
    def __init__(self, message: str = "degenerate pair"):
        super().__init__(message)


class DegenerateSegmentError(DomainError):
    def __init__(self, message: str = "degenerate segment"):
        super().__init__(message)


class NonConvergenceError(MinkowskiError, ArithmeticError):
    """A numeric search ran out of its iteration or expansion budget (CLI exit status 3)"""


class OutputError(MinkowskiError):
    """A report or figure could not be written (CLI exit status 2)"""
