"""Exception hierarchy shared across the package.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific class that applies.
"""


class EntstructError(Exception):
    """Base class for all package-specific errors."""


class UsageError(EntstructError):
    """A function was called with arguments it cannot accept."""


class ValidationError(EntstructError):
    """Constructed data violates a structural invariant."""


class NumericError(EntstructError):
    """A numeric sanity check failed (e.g. an expectation came out complex)."""


class CountsFormatError(EntstructError):
    """A counts or expectation file is malformed."""
