"""Exception types shared across the package.

Everything raised on bad input derives from ValueError so callers that
don't care about the fine-grained type can catch the builtin; runtime
failures (divergence, truncation, solver stalls) derive from RuntimeError.
"""


class DimensionMismatchError(ValueError):
    """Array shapes are inconsistent with the problem dimensions."""


class DomainError(ValueError):
    """A scalar argument is outside its admissible range (e.g. t <= 0)."""


class ConfigError(ValueError):
    """An experiment configuration file or preset is malformed."""


class InfeasibleProblemError(ValueError):
    """The linear constraint system admits no solution."""


class SolverError(RuntimeError):
    """An inner solve (Newton loop, step-size selection) failed to converge."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DivergenceError(RuntimeError):
    """The trajectory left the finite range; carries the last good state."""

    def __init__(self, message, t=None, last_state=None):
        super().__init__(message)
        self.t = t
        self.last_state = last_state


class TruncatedTrajectoryError(RuntimeError):
    """Step budget exhausted before the horizon; carries the partial result."""

    def __init__(self, message, trajectory=None, t_reached=None):
        super().__init__(message)
        self.trajectory = trajectory
        self.t_reached = t_reached


class EstimationError(RuntimeError):
    """A diagnostic fit had too little usable data."""
