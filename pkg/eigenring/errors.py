"""Exceptions raised by eigenring.

Validation failures map to exit code 2, numerical failures to exit code 3.
"""
from typing import Any, List, Optional


class EigenringError(Exception):
    """Base class for all eigenring errors"""

    exit_code = 1


class ValidationFailure(EigenringError, ValueError):
    """Input violates a precondition"""

    exit_code = 2


class NumericalFailure(EigenringError, ArithmeticError):
    """A computation could not produce a trustworthy result"""

    exit_code = 3


class InvalidSizeError(ValidationFailure):
    pass


class DomainError(ValidationFailure):
    pass


class AmbiguousDominanceError(ValidationFailure):
    """Two eigenvalues of M coincide at a threshold angle"""

    def __init__(self, message: str, threshold_index: int):
        super().__init__(message)
        self.threshold_index = threshold_index


class NoRealAngleError(ValidationFailure):
    pass


class PolygonParseError(ValidationFailure):
    def __init__(self, message: str, line_number: Optional[int] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ConvergenceError(NumericalFailure):
    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report


class IterationTimeout(ConvergenceError):
    pass


class NonPositiveOverlapError(NumericalFailure):
    """The overlap matrix is not positive definite (overcomplete basis)"""

    def __init__(self, message: str, overlap_eigenvalues: Optional[List[float]] = None):
        super().__init__(message)
        self.overlap_eigenvalues = overlap_eigenvalues or []


class ContinuityError(NumericalFailure):
    pass


class IntegrationError(NumericalFailure):
    def __init__(self, message: str, achieved: float):
        super().__init__(message)
        self.achieved = achieved


class EmptyBasisError(NumericalFailure):
    pass


class NoRealSolutionError(NumericalFailure):
    pass


class DegenerateRotationError(NumericalFailure):
    pass


class CorrespondenceError(NumericalFailure):
    pass


class OvercompleteBasisError(NonPositiveOverlapError):
    """The single-well translates are linearly dependent on the ring"""
