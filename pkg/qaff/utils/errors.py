class QaffError(Exception):
    """Base class for every error raised by qaff"""


class ConfigError(QaffError, ValueError):
    """Bad command-line or configuration input"""


class UnknownLabel(QaffError, ValueError):
    pass


class RankOutOfRange(QaffError, ValueError):
    pass


class IndexOutOfRange(QaffError, ValueError):
    pass


class ExactDivisionFailed(QaffError, ArithmeticError):
    """Raised when a Laurent polynomial is not a multiple of the divisor"""

    def __init__(self, message, context=None):
        super().__init__(message)
        self.context = context


class DivisionByZero(QaffError, ZeroDivisionError):
    pass


class NegativePowerOfNonMonomial(QaffError, ValueError):
    pass


class EmptyTruncation(QaffError, ValueError):
    pass


class VertexNotInTruncation(QaffError, ValueError):
    pass


class FrozenVertex(QaffError, ValueError):
    pass


class UnknownVertex(QaffError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else 'unknown vertex'


class LaurentPhenomenonViolation(QaffError, ArithmeticError):
    pass


class DependencyCycle(QaffError, RuntimeError):
    pass


class MissingFundamental(QaffError, LookupError):
    pass


class InvalidQCharacter(QaffError, ValueError):
    """A computed q-character broke positivity or lost its dominant monomial"""


class NotAdjacent(QaffError, ValueError):
    pass


class NotThin(QaffError, ValueError):
    pass


class NotInImageLattice(QaffError, ValueError):
    pass


class UnsupportedType(QaffError, ValueError):
    pass


class NotSpecialPosition(QaffError, ValueError):
    pass


class CorruptCache(QaffError, ValueError):
    pass
