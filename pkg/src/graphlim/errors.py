"""Exception types shared by all modules."""


class GraphlimError(Exception):
    """Base class for all package errors."""


class PreconditionError(GraphlimError):
    """An operation was called with inputs violating its contract."""


class CapExceeded(PreconditionError):
    """A configured size or enumeration cap was exceeded."""


class DepthExhausted(GraphlimError):
    """A witness search ran out of levels: the prefix is too shallow.

    This is never a refutation of the underlying existence statement,
    only a report of how deep the search looked.
    """

    def __init__(self, message: str, depth: int):
        super().__init__(message)
        self.depth = depth
