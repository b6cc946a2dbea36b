"""Exception taxonomy shared across the package."""


class RandClusterError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(RandClusterError, ValueError):
    """An argument fails a precondition (shape, range, type)."""


class ResourceLimitError(RandClusterError):
    """A request exceeds a hard size cap (qubit count, sample budget)."""


class FitDegenerateError(RandClusterError):
    """Curve fitting cannot proceed, e.g. all data points coincide."""


class NoCrossingError(RandClusterError):
    """A fitted curve never reaches the requested level on [0, 1]."""


class BootstrapUnstableError(RandClusterError):
    """Too many bootstrap replicas failed to produce an estimate."""


class NoInteriorMaxError(RandClusterError):
    """The empirical maximum sits on the grid boundary, so no local fit exists."""
