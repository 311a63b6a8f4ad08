"""Shared exception types."""


class ParseError(ValueError):
    """Raised when a text artifact (layout, lexicon, model file) is malformed.

    Carries the 1-based line number when one is known.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownLayoutError(KeyError):
    """Requested built-in layout name does not exist."""


class NoCandidatesError(ValueError):
    """Recognition was asked to pick a word from an empty candidate set."""
