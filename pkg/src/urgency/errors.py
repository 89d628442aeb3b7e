"""Exception types shared across the package."""


class UrgencyError(Exception):
    """Base class for all domain errors."""


class ParseError(UrgencyError):
    """Raised on malformed term, grammar, or automaton input."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class GrammarError(UrgencyError):
    """Raised when a grammar or term violates a structural invariant."""


class AlphabetError(UrgencyError):
    """Raised when a word or automaton uses a symbol outside the alphabet."""


class ResourceLimitError(UrgencyError):
    """Raised when a computation would exceed a configured resource cap.

    `kind` names the exhausted resource, `limit` the configured cap, and
    `needed` a lower bound on what the computation would have required.
    """

    def __init__(self, kind, limit, needed, message=None):
        self.kind = kind
        self.limit = limit
        self.needed = needed
        if message is None:
            message = f"{kind} cap exceeded: limit {limit}, would need at least {needed}"
        super().__init__(message)
