"""Exception hierarchy shared by every pitkit module."""


class PitError(Exception):
    """Base class for all pitkit errors."""


class InvariantViolation(PitError):
    """An internal consistency check failed; indicates a bug, not bad input."""


# field
class NotPrime(PitError, ValueError):
    pass


class BadModulusDegree(PitError, ValueError):
    pass


class ReducibleModulus(PitError, ValueError):
    pass


class FieldMismatch(PitError, TypeError):
    pass


class DivisionByZero(PitError, ZeroDivisionError):
    pass


class FieldTooSmall(PitError, ValueError):
    pass


# circuit
class MalformedDocument(PitError, ValueError):
    pass


class DegreeMismatch(PitError, ValueError):
    pass


class ZeroFormInTerm(PitError, ValueError):
    pass


class TooManyTerms(PitError, ValueError):
    pass


class DimensionMismatch(PitError, ValueError):
    pass


class ExpansionTooLarge(PitError, RuntimeError):
    pass


class IndexOutOfRange(PitError, IndexError):
    pass


class ZeroAffineFactor(PitError, ValueError):
    pass


# ideals
class NotHomogeneous(PitError, ValueError):
    pass


class GradedSpaceTooLarge(PitError, RuntimeError):
    pass


class PathExplosion(PitError, RuntimeError):
    pass


class CircuitIsZero(PitError, ValueError):
    pass


class CertificateNotFound(InvariantViolation):
    pass


# hitting
class OracleError(PitError, RuntimeError):
    pass
