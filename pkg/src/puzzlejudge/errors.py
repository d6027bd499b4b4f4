"""Exception types shared across the package."""


class PuzzleError(Exception):
    """Base class for all puzzlejudge errors."""


class UnknownCountryError(PuzzleError):
    """A knowledge lookup was made for a country absent from the table."""


class ExpressionParseError(PuzzleError):
    """An arithmetic expression string could not be parsed."""


class GenerationExhaustedError(PuzzleError):
    """Rejection sampling failed to produce a valid instance within the retry bound."""


class BudgetExceededError(PuzzleError):
    """A solver ran out of its time budget before reaching an answer."""


class UnsupportedGameError(PuzzleError):
    """The requested operation is not defined for this game."""


class PlayerTransportError(PuzzleError):
    """A remote player failed to produce a response after bounded retries."""


class MalformedResponseError(PlayerTransportError):
    """A remote endpoint returned a body that does not parse as a chat completion."""
