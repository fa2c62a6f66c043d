"""Exception types shared across the package."""


class XiError(Exception):
    """Base class for numerical failures raised by this package."""


class DomainError(XiError, ValueError):
    """Argument outside the domain an evaluator supports."""


class PoleError(DomainError):
    """Argument sits on a pole."""


class NonConvergence(XiError):
    """A series or iteration hit its configured cap."""


class ToleranceNotMet(XiError):
    """Quadrature or series could not reach the requested accuracy."""
