"""Exception hierarchy.

Two families matter to callers: ``ValidationError`` (bad inputs, violated
assumptions; CLI exit code 2) and ``NumericError`` (a numerical routine could
not deliver; CLI exit code 3).
"""


class CoulombEdgeError(Exception):
    pass


class ValidationError(CoulombEdgeError, ValueError):
    pass


class NumericError(CoulombEdgeError, ArithmeticError):
    pass


class DomainError(ValidationError):
    pass


class ParameterError(ValidationError):
    pass


class AssumptionViolated(ValidationError):
    def __init__(self, failed, message=None):
        self.failed = tuple(failed)
        super().__init__(message or "assumptions violated: " + ", ".join(self.failed))


class SubcriticalN(ValidationError):
    def __init__(self, n, c_n, minimal_n):
        self.n = n
        self.c_n = c_n
        self.minimal_n = minimal_n
        super().__init__(
            f"c_n = {c_n:.6g} <= 0 at n = {n}; scaling constants need n >= {minimal_n}"
        )


class EmptySample(ValidationError):
    pass


class NoConvexityFloor(ValidationError):
    pass


class NoSignChange(NumericError):
    pass


class NonFinite(NumericError):
    pass


class NoConvergence(NumericError):
    pass


class MaxDepthExceeded(NumericError):
    pass


class NoSolution(NumericError):
    pass


class EnvelopeViolation(NumericError):
    """A rejection proposal produced a positive log acceptance ratio."""
