"""Exception types raised across the study.

Every class derives from the built-in exception a caller would already
expect (``ValueError`` for bad input, ``RuntimeError`` for numerical
trouble), so generic handlers keep working.
"""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class NearDiagonalError(DomainError):
    """A singular kernel was requested too close to the diagonal."""


class ProximityError(DomainError):
    """An evaluation point lies too close to the support of its input."""


class CapacityError(ValueError):
    """A degree or derivative order exceeds the tabulated capacity."""


class ConfigError(ValueError):
    """A run configuration is inconsistent or cannot be parsed."""


class AtomValidationError(ValueError):
    """An atomic decomposition contains an atom failing its clauses."""


class NumericError(RuntimeError):
    """A numerical routine failed to produce a trustworthy value."""


class EvaluationError(NumericError):
    """An integrand returned a non-finite value at a quadrature node."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class ToleranceError(NumericError):
    """Adaptive integration did not reach the requested tolerance."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
