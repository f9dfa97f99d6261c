"""Exception hierarchy.

``InputError`` and its subclasses mean the caller handed us bad data and map to
CLI exit status 2.  ``EngineError`` means two routes that must agree did not;
that is a bug in this package, never in the input.
"""


class FiberlabError(Exception):
    pass


class InputError(FiberlabError, ValueError):
    """Malformed or out-of-contract input."""


class InconsistentConfiguration(InputError):
    """Combinatorial data that cannot come from an actual fiber."""


class UnsupportedInput(InputError):
    """Valid data outside what the engine can simulate or decide."""


class EngineError(FiberlabError, AssertionError):
    """Internal cross-check failed."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace or {}
