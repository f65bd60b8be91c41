"""Exception types shared across the package."""


class MergeflowError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MergeflowError):
    """Physical quantity outside its admissible range (e.g. density)."""


class ConfigError(MergeflowError):
    """Invalid scenario, parameter set, or configuration file."""
