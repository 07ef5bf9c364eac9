"""Exception hierarchy shared across the package."""


class HighQuantError(Exception):
    """Base class for all package errors."""


class DomainError(HighQuantError, ValueError):
    """An argument lies outside the domain of a function."""


class ConfigurationError(HighQuantError, ValueError):
    """Invalid model name, schedule, or experiment configuration."""


class NumericError(HighQuantError, ArithmeticError):
    """A numerical procedure (root bracketing, iteration) failed."""


class DegenerateSpacing(HighQuantError, ArithmeticError):
    """Two of the order statistics (or quantiles) used for a spacing coincide.

    The estimator or functional is undefined for such input.
    """


class NonpositiveThreshold(HighQuantError, ValueError):
    """The threshold order statistic is not positive, so log-scale estimation fails."""


class DataFileError(HighQuantError, ValueError):
    """A data file could not be parsed; the message names the offending line."""
