"""Exception types raised across the package."""


class SingularMatrixError(ArithmeticError):
    pass


class DivergenceError(ArithmeticError):
    pass


class ParameterError(ValueError):
    """A parameter violates its physical range."""


class DegenerateDriveError(ValueError):
    pass


class DomainError(ValueError):
    """A closed form was asked for outside the regime it holds in."""


class ConfigurationError(ValueError):
    """Coupling constants do not match the requested configuration."""


class PoleError(ZeroDivisionError):
    pass


class NonUniqueSteadyStateError(ArithmeticError):
    pass


class UnstableError(ArithmeticError):
    pass


class PhysicalityError(ArithmeticError):
    pass


class NonConvergenceError(RuntimeError):
    pass


class TruncationError(RuntimeError):
    pass


class ConfigError(ValueError):
    """Malformed or incomplete configuration file."""
