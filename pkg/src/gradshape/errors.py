"""Exception hierarchy shared by all modules."""


class GradshapeError(Exception):
    """Base class for every error raised by gradshape."""


class DomainError(GradshapeError, ValueError):
    """An argument lies outside (or on the boundary of) the admissible set."""


class CapabilityError(GradshapeError):
    """The model does not provide the closed form an operation needs."""


class DegenerateError(GradshapeError, ArithmeticError):
    """A frozen or branch point: the linear system for the envelope is singular."""


class ConvergenceError(GradshapeError):
    """An iterative solve did not converge; ``residuals`` carries the last state."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class InfeasibleError(GradshapeError):
    """Boundary data admits no interpolant satisfying the gradient constraint."""
