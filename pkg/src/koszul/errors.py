"""Exception types."""


class KoszulError(Exception):
    """Base class for errors raised by this package."""


class ChartError(KoszulError):
    """Chart mismatch, unknown variable, bad declaration."""


class ParityError(KoszulError):
    """Parity precondition violated."""


class WindowError(KoszulError):
    """Incompatible truncation windows or a series that does not close."""


class DivisibilityError(KoszulError):
    """An expression expected to be divisible by a power of hbar is not."""


class NotInvertibleError(KoszulError):
    """An element that should be invertible is not (within the window)."""


class NotPoissonError(KoszulError):
    """A multivector failed the [[P, P]] = 0 certification."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CoordinateMapError(KoszulError):
    """A coordinate map and its claimed inverse do not round-trip."""


class ParseError(KoszulError):
    """Syntax or resolution error in an expression, with a position."""

    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)
