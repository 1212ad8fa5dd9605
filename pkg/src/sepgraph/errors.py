"""Exception hierarchy shared by every module.

All domain failures derive from :class:`SepGraphError` so the command line
front end can map them to exit code 1 in one place.
"""


class SepGraphError(Exception):
    """Base class for domain errors."""


class ParseError(SepGraphError):
    """Malformed SGF input. Carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownVertex(ParseError):
    pass


class UnknownEdge(ParseError):
    pass


class DuplicateName(ParseError):
    pass


class GroupOverlap(ParseError):
    pass


class UncoveredEdge(ParseError):
    pass


class NotBipartite(ParseError):
    pass


class DisconnectedWord(SepGraphError):
    pass


class EndpointMismatch(SepGraphError):
    pass


class SizeLimitExceeded(SepGraphError):
    pass


class InputNotHereditary(SepGraphError):
    pass


class InputNotSaturated(SepGraphError):
    pass


class InconsistentLevels(SepGraphError):
    pass


class NoSuchBall(SepGraphError):
    pass


class RadiusTooSmall(SepGraphError):
    pass


class UnstableBallSet(SepGraphError):
    pass


class NotFiniteType(SepGraphError):
    pass
