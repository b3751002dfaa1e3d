"""Exception types shared across the package."""


class InvalidParameter(ValueError):
    pass


class NormalizationError(ValueError):
    pass


class MalformedPartition(ValueError):
    pass


class VacuousPartition(ValueError):
    """Interval boundaries collapse (some boundary >= 1 or ordering breaks).

    Usually means beta is too large for the alphabet size.
    """


class DomainError(ValueError):
    pass


class InstanceTooLarge(ValueError):
    pass


class CapacityExceeded(RuntimeError):
    """An estimator tried to hold more live registers than it was given."""
