"""Exception hierarchy shared by every module of the package."""


class IxgdError(Exception):
    """Base class for all errors raised by ixgd."""


class DomainError(IxgdError, ValueError):
    """An argument lies outside the domain of the requested quantity."""


class MomentNotFiniteError(DomainError):
    """The requested moment does not exist for the distribution."""


class HazardOverflowError(IxgdError, OverflowError):
    """The survival function underflowed so the hazard cannot be formed."""


class DataError(IxgdError, ValueError):
    """Input observations are malformed or unusable."""


class EstimationError(IxgdError):
    """A fit failed; ``diagnostics`` carries what the optimizer saw."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class DegenerateInformationError(IxgdError):
    """Observed information is not strictly positive."""
