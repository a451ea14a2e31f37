"""Error hierarchy shared across the package.

Kept deliberately small: loaders and validators raise DataError (bad
input files, broken invariants in user data), configuration handling
raises ConfigError, and InvariantError flags bugs in our own pipeline
state. The CLI maps these onto distinct exit codes.
"""


class NewsbiasError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(NewsbiasError):
    """Invalid configuration or command usage."""


class DataError(NewsbiasError):
    """Malformed or inconsistent input data."""


class InvariantError(NewsbiasError):
    """An internal pipeline invariant was violated."""
