"""Exception hierarchy shared by all modules."""


class KdvHeatError(Exception):
    """Base class for library errors."""


class DenominatorZero(KdvHeatError, ZeroDivisionError):
    """The tau-function vanishes at an evaluation point (a pole of the potential)."""


class DiagonalEvaluation(KdvHeatError, ValueError):
    """x == y was passed to an expression carrying negative powers of (x - y)."""


class DuplicateWavenumber(KdvHeatError, ValueError):
    pass


class UnsupportedLevel(KdvHeatError, ValueError):
    pass


class QuadratureNotConverged(KdvHeatError, ArithmeticError):
    pass


class TruncationExceeded(KdvHeatError, ValueError):
    """A pseudo-differential product was asked for orders below the tracked truncation."""


class NotMultiplicationOperator(KdvHeatError, ArithmeticError):
    pass


class ConfigParseError(KdvHeatError, ValueError):
    pass


class UnsupportedTauType(KdvHeatError, ValueError):
    pass
