"""Exception types raised by the library.

All of them derive from :class:`ValueError` so callers that only care about
"bad input" can catch that.
"""


class DomainError(ValueError):
    """An argument lies outside the operation's domain."""


class UnsupportedParameterError(DomainError):
    """The parameters are valid in principle but no construction is implemented."""


class DegenerateColumnError(DomainError):
    """A design column has zero variance, so correlations are undefined."""

    def __init__(self, column: int):
        super().__init__(f"column {column} is constant; correlation undefined")
        self.column = column


class RejectedInputError(DomainError):
    """Construction ingredients failed validation before any work was done."""
