"""Exception hierarchy shared by every layer of the package."""


class KChangeError(Exception):
    """Base class for all errors raised by kchange."""


class MalformedProblemError(KChangeError):
    """The problem has no inputs, no queries, or a non-total oracle/target."""


class IllegalMoveError(KChangeError):
    """A move violates the game rules."""


class RefusedQueryError(IllegalMoveError):
    """The query was already asked; its answer is fixed."""


class ForfeitError(KChangeError):
    """An agent made an illegal move during a refereed match."""

    def __init__(self, agent: str, reason: str):
        super().__init__(f"agent {agent!r} forfeits: {reason}")
        self.agent = agent
        self.reason = reason


class LimitError(KChangeError):
    """A query, node or time limit was exceeded."""


class CapacityError(KChangeError):
    """The requested instance is larger than the configured guard allows."""


class DependencyError(KChangeError):
    """A formula needs a value that the caller did not supply."""


class ConfigurationError(KChangeError):
    """An agent, problem or run configuration is inconsistent."""


class UnavailableError(KChangeError):
    """A result cannot be produced from an incomplete solve."""
