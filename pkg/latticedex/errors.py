class LatticedexError(Exception):
    """Base class for every error raised by latticedex."""


class InvalidArgumentError(LatticedexError, ValueError):
    pass


class UnsupportedError(LatticedexError, ValueError):
    pass


class RamifiedPrimeError(UnsupportedError):
    """A prime dividing the conductor was offered where an unramified one is needed."""


class FieldMismatchError(LatticedexError, ValueError):
    pass


class InvalidDesignError(LatticedexError, ValueError):
    """The selected ideals cannot form an index code (e.g. not pairwise coprime)."""


class TooLargeError(LatticedexError):
    pass


class UndefinedDistanceError(LatticedexError):
    """Minimum distance asked of a constellation with fewer than two points."""


class BoundsUnavailableError(LatticedexError):
    def __init__(self, message, minkowski_upper=None):
        super().__init__(message)
        self.minkowski_upper = minkowski_upper


class NotBracketedError(LatticedexError, ValueError):
    pass


class InsufficientDataError(LatticedexError, ValueError):
    pass


class CorruptCodeFileError(LatticedexError):
    pass


class InfeasibleDesignError(LatticedexError):
    """An experiment asks for more prime ideals than the chosen prime provides."""
