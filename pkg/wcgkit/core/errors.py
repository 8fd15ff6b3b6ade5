"""Exceptions raised by the simulation, learning and LP layers."""


class InvalidActionError(ValueError):
    """An action label is out of range for the arm's class."""


class InfeasibleActionError(ValueError):
    """A policy emitted actions that violate the coupling constraints."""


class InconsistentInitialError(ValueError):
    """An initial occupancy does not sum to one within each class."""


class ErgodicityError(RuntimeError):
    """The ergodic state is unreachable or the chain is periodic."""

    def __init__(self, message, labels=None):
        super(ErgodicityError, self).__init__(message)
        self.labels = labels


class SingularSystemError(RuntimeError):
    """A taboo linear system has no unique solution."""


class NonConvergenceError(RuntimeError):
    """An iterative scheme did not meet its tolerance within max_iter."""


class GoodCaseError(RuntimeError):
    """Estimated kernels do not let every state reach the ergodic state."""


class NotIndexableError(RuntimeError):
    """No sign change of the Q-factor gap inside the bisection bracket."""


class IrreparableError(RuntimeError):
    """Greedy repair could not restore constraint feasibility."""


class CoverageError(RuntimeError):
    """Exploration did not cover every SA pair in the allotted steps."""


class ScenarioError(ValueError):
    """A scenario file failed to parse or validate."""

    def __init__(self, message, diagnostics=None):
        super(ScenarioError, self).__init__(message)
        self.diagnostics = list(diagnostics or [])


class InfeasibleError(RuntimeError):
    """The linear program has no feasible point."""


class UnboundedError(RuntimeError):
    """The linear program objective is unbounded."""
