"""Exception types raised across the package."""


class TwoToOneError(Exception):
    """Base class for all errors raised by this package."""


# -- field construction / arithmetic ---------------------------------------

class FieldError(TwoToOneError, ValueError):
    pass


class NotPrime(FieldError):
    pass


class ReduciblePolynomial(FieldError):
    pass


class DomainTooLarge(FieldError):
    pass


class FieldMismatch(FieldError):
    pass


class NotASubfield(FieldError):
    pass


class EvenCharacteristic(FieldError):
    pass


class OddCharacteristic(FieldError):
    pass


class DivisionByZero(TwoToOneError, ZeroDivisionError):
    pass


class ZeroConstantTerm(TwoToOneError, ValueError):
    pass


# -- tables and predicates --------------------------------------------------

class ImageOutsideCodomain(TwoToOneError, ValueError):
    pass


class InvalidK(TwoToOneError, ValueError):
    pass


class OutOfRange(TwoToOneError, ValueError):
    pass


class InvalidPhi(TwoToOneError, ValueError):
    pass


class DimensionMismatch(TwoToOneError, ValueError):
    pass


class OddDimension(TwoToOneError, ValueError):
    pass


# -- constructions ----------------------------------------------------------

class HypothesisFailed(TwoToOneError):
    """A construction hypothesis does not hold.

    ``hypothesis`` names the failed check; ``result`` (when available) is the
    :class:`~twotoone.constructions.Construction` that was built anyway, so the
    map and the full certificate stay inspectable.
    """

    def __init__(self, hypothesis, result=None, detail=""):
        self.hypothesis = hypothesis
        self.result = result
        self.detail = detail
        msg = f"hypothesis failed: {hypothesis}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class SoundnessViolation(TwoToOneError, AssertionError):
    """All hypotheses of a construction passed but the census disagrees."""


class NotPermutation(TwoToOneError, ValueError):
    pass


class NotTwoToOne(TwoToOneError, ValueError):
    pass


class NotComposable(TwoToOneError, ValueError):
    pass


class BadSplit(TwoToOneError, ValueError):
    pass


class BadPhi(TwoToOneError, ValueError):
    pass


class TraceZero(TwoToOneError, ValueError):
    pass


class ZeroDirection(TwoToOneError, ValueError):
    pass


class EqualGammaDelta(TwoToOneError, ValueError):
    pass


class NoSuchExponent(TwoToOneError, ValueError):
    pass


# -- catalog ----------------------------------------------------------------

class OrderConditionFailed(TwoToOneError, ValueError):
    pass


class BadIndexSet(TwoToOneError, ValueError):
    pass


class EvenM(TwoToOneError, ValueError):
    pass


class NoPiExists(TwoToOneError, ValueError):
    pass


class OddK(TwoToOneError, ValueError):
    pass


class GcdFailed(TwoToOneError, ValueError):
    pass


class NotNormalized(TwoToOneError, ValueError):
    pass


class UnsupportedDegree(TwoToOneError, ValueError):
    pass


class ZeroParameter(TwoToOneError, ValueError):
    pass
