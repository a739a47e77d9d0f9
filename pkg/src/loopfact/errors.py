"""Exception hierarchy for loopfact."""


class LoopError(Exception):
    """Base class for all loopfact errors."""


class DomainError(LoopError, ValueError):
    """Input outside the domain of an operation (off-circle point, non-unitary symbol, ...)."""


class DegenerateLoopError(LoopError):
    """Loop is not in the big cell: a determinant or leading coefficient vanishes."""


class TruncationError(LoopError):
    """A truncation cannot meet the requested tolerance.

    ``bound`` carries the best tail bound (or residual) that was achieved.
    """

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class ConvergenceError(LoopError):
    """Section doubling did not settle; ``values`` holds the last two estimates."""

    def __init__(self, message, values=()):
        super().__init__(message)
        self.values = tuple(values)


class DivergentIntegralError(LoopError, ValueError):
    """The requested integral is infinite; ``index`` is the first failing level (1-based)."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NumericalDegeneracyError(LoopError):
    """A linear system that should be invertible was numerically singular."""


class ConsistencyError(LoopError):
    """Two formulas that must agree did not."""


class ParseError(LoopError, ValueError):
    """Malformed input document. ``location`` names the offending path."""

    def __init__(self, message, location=""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location
