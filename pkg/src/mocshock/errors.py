"""Exception hierarchy shared by all modules."""


class MocShockError(Exception):
    """Base class for every error raised by :mod:`mocshock`."""


class DomainError(MocShockError, ValueError):
    """Argument lies outside the domain of a branch function."""


class RangeError(MocShockError, ValueError):
    """Value exceeds the attainable range (e.g. a time past total collapse)."""


class ConvergenceError(MocShockError, RuntimeError):
    """An iterative solver failed to converge."""


class UnsupportedError(MocShockError, NotImplementedError):
    """The operation has no meaning for the requested configuration."""


class SingularError(MocShockError, ZeroDivisionError):
    """A coefficient needed as a divisor vanishes."""


class ShockError(MocShockError, ValueError):
    """Characteristics have crossed; the smooth solution no longer exists."""


class StepFailure(MocShockError, RuntimeError):
    """The ODE integrator could not take a step."""


class CflViolation(MocShockError, ValueError):
    """A requested time step breaks the advective stability bound."""


class ConfigError(MocShockError, ValueError):
    """Invalid scenario configuration."""


class NormalizationError(MocShockError, ValueError):
    """A probability interpretation was requested for an unnormalized profile."""
