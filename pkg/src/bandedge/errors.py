"""Exception types raised by the band-edge solvers."""


class BandEdgeError(Exception):
    """Base class for every error raised by :mod:`bandedge`."""


class DomainError(BandEdgeError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InfinitePeriodError(DomainError):
    """The operation needs a finite period but the potential has ``m = 1``."""


class TurningPointError(DomainError):
    """No classical turning point exists at the requested energy."""


class BelowWellError(TurningPointError):
    """Energy at or below the bottom of the well."""


class NoTurningPointError(TurningPointError):
    """Energy at or above the barrier top; the whole period is allowed."""


class InvalidPotentialError(DomainError):
    """A potential definition violates the symmetric single-well assumptions."""


class ConvergenceError(BandEdgeError, RuntimeError):
    """A numerical procedure failed to meet its accuracy target."""
