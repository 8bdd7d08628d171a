"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: FormatError -> 2,
PreconditionError -> 3.
"""


class CurvkitError(ValueError):
    """Base class for errors raised by this package."""


class FormatError(CurvkitError):
    """Malformed input file or stream (bad token, bad structure, bad path)."""


class PreconditionError(CurvkitError):
    """Valid input that violates an operation's precondition (too small,
    degenerate, out of supported range)."""
