"""Exception hierarchy shared across the package."""


class MLRabiError(Exception):
    """Base class for all package errors."""


class DimensionError(MLRabiError, ValueError):
    """Array shapes disagree with the declared level counts."""


class NotHermitianError(MLRabiError, ValueError):
    pass


class ConvergenceError(MLRabiError, RuntimeError):
    """An iterative numerical routine did not converge."""


class PrecisionError(MLRabiError, ArithmeticError):
    """A result failed its residual or accuracy contract."""


class DomainError(MLRabiError, ValueError):
    """Argument outside the domain of a special function or distribution."""


class ConfigError(MLRabiError, ValueError):
    """Invalid command-line or config-file input."""
