"""Exception hierarchy shared across the toolkit."""


class SinetError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(SinetError):
    """Input data violates a documented precondition."""


class OrderingError(ValidationError):
    """A stream that must be sorted is not."""


class UnknownActorError(SinetError, KeyError):
    """An actor id was looked up that is not present in the graph."""

    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return self.args[0] if self.args else ""


class UndefinedMeasureError(SinetError):
    """A measure is requested outside its domain (e.g. empty graph)."""


class UndefinedModelError(SinetError):
    """Model parameters cannot be extracted from a valuation basis."""


class EvaluationError(SinetError):
    """An evaluation task is degenerate (e.g. single-class test set)."""


class ConvergenceError(SinetError):
    """Iterative computation failed to converge within its budget."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual
