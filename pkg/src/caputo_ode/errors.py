"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class MlOverflowError(OverflowError):
    """Mittag-Leffler value exceeds double precision range.

    Raised instead of returning a saturated float so callers can tell an
    overflow apart from a legitimate large value.
    """


class MissingDerivativeError(ValueError):
    """Operation needs f' but the right-hand side model does not carry one."""


class ConvergenceError(RuntimeError):
    """An iterative numerical procedure failed to converge.

    Distinct from a blow-up break: a break is a mathematical event reported in
    the trajectory status, this is a numerical failure of the method itself.
    """


class InsufficientDataError(ValueError):
    """Not enough usable samples for a fit."""
