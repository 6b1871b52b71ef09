"""Exception hierarchy."""


class MVBettiError(Exception):
    """Base class for every error raised by this package."""


class MalformedComplexError(MVBettiError, ValueError):
    """A differential has the wrong shape or squares to a nonzero map."""


class ChainMapError(MVBettiError, ValueError):
    """A map between complexes fails to commute with the differentials."""


class CoverError(MVBettiError, ValueError):
    """A family of parts does not cover the space it was supplied for."""


class IncompleteNerveError(MVBettiError, KeyError):
    """Nerve data was not populated deep enough for the request."""


class PropertyViolationError(MVBettiError):
    """A caller-asserted hypothesis (e.g. the Leray property) is contradicted by the data."""


class DagConstructionError(MVBettiError):
    """The admissible-index DAG is internally inconsistent (unique ancestor missing or ambiguous)."""


class BuildOrderError(MVBettiError):
    """A recursive complex was requested before its children were available."""


class ParseError(MVBettiError, ValueError):
    """Syntax or validation error in the text input format."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
