"""Exception hierarchy.

Validation failures (bad inputs) and solver failures (numerical trouble)
are kept apart so the command line can map them to distinct exit codes.
"""


class SyncNetError(Exception):
    """Base class for all package errors."""


class ValidationError(SyncNetError, ValueError):
    """Input violates a structural requirement."""


class DimensionError(ValidationError):
    pass


class NotPSDError(ValidationError):
    pass


class NotLaplacianError(ValidationError):
    pass


class DisconnectedError(ValidationError):
    """The conductance matrix describes a disconnected graph."""


class SolverError(SyncNetError, RuntimeError):
    """Numerical procedure failed to produce a trustworthy answer."""


class ConvergenceError(SolverError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class StabilityError(SolverError):
    pass


class ConditioningError(SolverError):
    pass


class LineSearchError(SolverError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
