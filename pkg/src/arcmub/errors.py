"""Exception types shared across the package."""


class ArcmubError(Exception):
    """Base class for all arcmub errors."""


# -- field construction and arithmetic ---------------------------------------

class NotPrime(ArcmubError):
    pass


class NotIrreducible(ArcmubError):
    pass


class DegreeMismatch(ArcmubError):
    pass


class DivisionByZero(ArcmubError, ZeroDivisionError):
    pass


class FieldMismatch(ArcmubError):
    pass


class WrongCharacteristic(ArcmubError):
    pass


# -- planes -------------------------------------------------------------------

class OrderTooLarge(ArcmubError):
    pass


class AxiomFailure(ArcmubError):
    pass


class ParseError(ArcmubError, ValueError):
    pass


class NotAQuadrilateral(ArcmubError):
    pass


class CoordinatizationFailure(ArcmubError):
    pass


# -- arcs and conics ----------------------------------------------------------

class UnknownPoint(ArcmubError):
    pass


class NotInArc(ArcmubError):
    pass


class NotAnOval(ArcmubError):
    pass


class OddOrder(ArcmubError):
    pass


class PointNotOnConic(ArcmubError):
    pass


class DuplicatePoints(ArcmubError):
    pass


class NotAHyperoval(ArcmubError):
    pass


# -- MUB ----------------------------------------------------------------------

class DimensionMismatch(ArcmubError):
    pass


class EvenCharacteristic(ArcmubError):
    pass


# -- certificates -------------------------------------------------------------

class VerificationFailed(ArcmubError):
    pass
