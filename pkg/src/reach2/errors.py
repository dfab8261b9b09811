"""Exception hierarchy shared by all reach2 modules."""


class Reach2Error(Exception):
    """Base class for every error raised by this package."""


class ParseError(Reach2Error, ValueError):
    """Unusable graph input (malformed line, bad id, self-loop, ...)."""


class PreconditionError(Reach2Error, ValueError):
    """An operation was called on input that violates its contract."""


class QueryError(Reach2Error, ValueError):
    """A query referenced ids outside the preprocessed structure."""


class InternalInvariantError(Reach2Error, RuntimeError):
    """A state that valid inputs can never produce was observed."""


class InvalidClosureError(InternalInvariantError):
    """A matrix passed off as a 2-reachability closure is not one."""
