"""Exception hierarchy shared by every module of the package."""


class SeminormalError(Exception):
    """Base class for all errors raised by this package."""


class RingMismatchError(SeminormalError, TypeError):
    """Two operands live in different rings."""


class ParseError(SeminormalError, ValueError):
    """A literal could not be parsed.

    ``position`` is the character offset of the offending token, or ``None``.
    """

    def __init__(self, message, position=None, token=None):
        self.position = position
        self.token = token
        self.detail = message
        if position is not None:
            message = f"{message} (at position {position}"
            message += f", token {token!r})" if token is not None else ")"
        super().__init__(message)


class MembershipError(SeminormalError, ValueError):
    """An element of an ambient ring does not lie in the requested subring."""


class UnsupportedRingError(SeminormalError, NotImplementedError):
    """The operation has no algorithm for this ring constructor."""


class NotIdempotentError(SeminormalError, ValueError):
    pass


class Rank1Violation(SeminormalError, ValueError):
    """Rank-1 certification failed: trace differs from 1 or a 2x2 minor is nonzero."""

    def __init__(self, message, trace=None, minor=None):
        self.trace = trace
        self.minor = minor
        super().__init__(message)


class FactorizationError(SeminormalError, ValueError):
    pass


class NotZeroDimensionalError(SeminormalError, ValueError):
    """A quasi-inverse was requested where none is computable."""


class ResourceLimitError(SeminormalError, RuntimeError):
    """A configured search or splitting bound was exceeded.

    This never means the mathematical answer is negative.
    """


class InvariantViolation(SeminormalError, AssertionError):
    """An internal consistency check failed."""


class OracleInconsistencyError(SeminormalError, ValueError):
    """An elimination oracle contradicted decidable ring arithmetic."""


class RelationError(SeminormalError, ValueError):
    """Input data violates a required algebraic relation (such as ``b^2 = c^3``)."""
