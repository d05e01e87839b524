"""Exception hierarchy. The CLI maps each class to a fixed exit code."""


class ModelError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(ModelError, ValueError):
    """Invalid argument (bad cutoff, qubit index, dimension mismatch, ...)."""


class DomainError(ModelError, ValueError):
    """Magnon parameters outside the stable, uniformly ordered regime."""


class ConvergenceError(ModelError, RuntimeError):
    """Result changed too much when the Fock cutoff was doubled."""


class NotFoundError(ModelError, LookupError):
    """No level intersection inside the requested window."""


class AmbiguityError(ModelError, LookupError):
    """More than one level intersection inside the requested window."""


class SingularityError(ModelError, ZeroDivisionError):
    """A perturbative energy denominator vanishes."""


class InsufficientSpanError(ModelError, ValueError):
    """A trace does not contain enough oscillation to measure a period."""
