"""Exception types shared across the package."""


class NumvarError(Exception):
    """Base class for all package-specific errors."""


class DuplicateError(NumvarError):
    """A sequence contains a repeated term."""


class WindowError(NumvarError):
    """Window parameters are outside the admissible range."""


class SupportError(NumvarError):
    """A test function's support is incompatible with the requested operation."""


class BudgetError(NumvarError):
    """A computation would exceed its configured cost ceiling."""


class ConfigError(NumvarError):
    """An experiment configuration file or CLI argument is malformed."""
