"""Exception hierarchy shared by the library and the command line."""


class VolpolyError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 1
    kind = "error"


class ValidationError(VolpolyError):
    """Malformed input or a violated structural requirement (bad schema,
    star-condition failure, inconsistent dimensions)."""

    exit_code = 2
    kind = "validation"


class PreconditionError(VolpolyError):
    """Input is well formed but outside an operation's domain."""

    exit_code = 3
    kind = "precondition"


class InternalAssertionError(VolpolyError):
    """A verified identity failed. This means a bug, never bad input."""

    exit_code = 4
    kind = "internal"

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
