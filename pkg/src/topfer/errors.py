"""Exception hierarchy shared by the solvers."""

from __future__ import annotations


class TopferError(Exception):
    """Base class for every error raised by this package."""


class InvalidProblemError(TopferError, ValueError):
    """The problem definition cannot be integrated (e.g. non-finite rhs at the origin)."""


class InvalidConfigError(TopferError, ValueError):
    """A numeric option is out of range."""


class DomainError(TopferError, ValueError):
    """An argument lies outside the domain of a formula."""


class BranchError(DomainError):
    """Terminal starred velocity has the wrong sign for the group parameter."""


class BlowUpError(TopferError):
    """The initial value problem halted before the truncated boundary."""

    def __init__(self, message: str, halt_abscissa: float | None = None):
        super().__init__(message)
        self.halt_abscissa = halt_abscissa


class NoConvergenceError(TopferError):
    """An iteration ran out of budget. ``history`` holds everything computed so far."""

    def __init__(self, message: str, history=()):
        super().__init__(message)
        self.history = list(history)


class StalledSecantError(NoConvergenceError):
    """Two consecutive secant iterates produced identical transformation function values."""


class DoubleBlowUpError(NoConvergenceError):
    """Two successive iterates both failed to reach the truncated boundary."""


class BadStartError(TopferError):
    """The continuation could not converge at its starting parameter."""
