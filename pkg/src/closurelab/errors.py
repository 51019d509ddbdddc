"""Exception hierarchy shared by every closurelab module."""


class ClosureLabError(Exception):
    """Base class for all library errors."""


class DuplicateAttribute(ClosureLabError, ValueError):
    pass


class EmptyName(ClosureLabError, ValueError):
    pass


class UniverseMismatch(ClosureLabError, ValueError):
    pass


class DuplicateLeft(ClosureLabError, ValueError):
    pass


class CapExceeded(ClosureLabError, ValueError):
    """An exhaustive computation was asked for beyond its configured size cap."""


class NotClosed(ClosureLabError, ValueError):
    pass


class NotMaterialized(ClosureLabError, ValueError):
    """A closure table covering all of 2^U was expected."""


class NotSubsetOfMu(ClosureLabError, ValueError):
    pass


class NotIndependent(ClosureLabError, ValueError):
    pass


class UnequalClosures(ClosureLabError, ValueError):
    pass


class NotACover(ClosureLabError, ValueError):
    pass


class EmptyTop(ClosureLabError, ValueError):
    pass


class ClosureMismatch(ClosureLabError, ValueError):
    pass


class NoDirectDetermination(ClosureLabError, ValueError):
    pass


class PairMismatch(ClosureLabError, ValueError):
    pass


class NotNonredundantCover(ClosureLabError, ValueError):
    pass


class PairNotInMu(ClosureLabError, ValueError):
    pass


class BadParams(ClosureLabError, ValueError):
    pass


class NotHereditary(ClosureLabError, ValueError):
    pass


class InvariantViolation(ClosureLabError, AssertionError):
    """A property the library guarantees was observed to fail.

    Raised instead of silently returning a wrong answer; the audit harness
    catches it and turns it into a failing verdict.
    """


class ParseError(ClosureLabError, ValueError):
    """Base for file-format errors; carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownAttribute(ParseError):
    pass


class FileSyntaxError(ParseError):
    pass


class MissingHeader(ParseError):
    pass
