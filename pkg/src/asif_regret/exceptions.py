"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class RegretError(Exception):
    exit_code = 1


class ValidationError(RegretError, ValueError):
    """An input violates a domain invariant."""

    exit_code = 2


class TrivialProblemError(ValidationError):
    """The state space does not straddle the threshold, so one action dominates."""


class UndefinedEstimatorError(ValidationError):
    """The estimator is undefined for the given design (e.g. a zero sample size)."""


class InfeasibleSpaceError(RegretError):
    exit_code = 3


class EnumerationCapError(RegretError):
    """Exact enumeration would exceed the configured cap; use Monte Carlo instead."""

    exit_code = 4
