"""Exception types shared across the package."""


class SppBoundsError(Exception):
    """Base class for all errors raised by sppbounds."""


class NotADistribution(SppBoundsError, ValueError):
    """Probabilities are negative or do not sum to one."""


class DomainError(SppBoundsError, ValueError):
    """An argument lies outside the mathematical domain of a formula."""


class NotApplicable(SppBoundsError):
    """A bound exists in principle but its criterion is not met.

    Distinct from a bound of zero: "no information" and "bound = 0" are
    different certification outcomes.
    """


class InsufficientData(SppBoundsError):
    """Not enough observables were supplied to say anything."""


class NoSolution(SppBoundsError):
    """A root-finding problem has no admissible solution."""
