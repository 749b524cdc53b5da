"""Exceptions raised by the engine when a requested computation has no valid answer."""


class MaxLabError(Exception):
    pass


class WindowTooSmall(MaxLabError):
    """A superlevel set reaches the boundary of the window it was asked for."""


class TailNotCertified(MaxLabError):
    """The tail of a norm integral cannot be bounded below the requested tolerance."""


class NoSolution(MaxLabError):
    """The average never crosses the requested level on the reachable side."""


class PreconditionViolated(MaxLabError):
    pass


class UnsupportedDimension(MaxLabError):
    pass


class InputError(MaxLabError, ValueError):
    """Malformed user input; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
