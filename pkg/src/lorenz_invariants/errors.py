"""Exception types shared across the package."""


class LorenzError(Exception):
    """Base class for all errors raised by this package."""


class MalformedSequenceError(LorenzError, ValueError):
    pass


class ParseError(LorenzError, ValueError):
    """Literal could not be parsed; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DomainError(LorenzError, ValueError):
    pass


class AmbiguousItineraryError(LorenzError):
    def __init__(self, message: str, index: int):
        super().__init__(f"{message} (iterate {index})")
        self.index = index


class NotRenormalizableError(LorenzError, ValueError):
    pass


class NoRootError(LorenzError, ArithmeticError):
    pass


class UnsupportedError(LorenzError, ValueError):
    pass
