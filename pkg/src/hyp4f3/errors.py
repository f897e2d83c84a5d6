"""Exception hierarchy.

Every error raised by the package derives from :class:`HypError`.  The CLI
maps :class:`DomainError` subclasses to exit code 1 and
:class:`InputError` subclasses to exit code 2.
"""


class HypError(Exception):
    """Base class for all package errors."""


class DomainError(HypError):
    """A well-formed request that has no mathematical answer."""


class InputError(HypError):
    """Malformed input (bad tokens, schema violations, bad matrices)."""


# symbolic
class ZeroDenominator(DomainError):
    pass


class DivisionByZeroFunction(DomainError):
    pass


# gammatype / numerics
class PoleHit(DomainError):
    pass


# group
class DegenerateComposition(DomainError):
    pass


class NonInvertible(DomainError):
    pass


class DegenerateEta(DomainError):
    pass


class PreconditionViolated(DomainError):
    pass


class IndeterminateEquality(DomainError):
    """Raised when equality of two gamma-type coefficients cannot be decided
    by shift recurrences alone (a reflection-type identity might hold)."""


# generators
class UnknownGenerator(InputError):
    pass


class MalformedMatrix(InputError):
    pass


class NotInGeneratedSubgroup(DomainError):
    pass


# relations
class DegeneratePair(DomainError):
    """The pair of transformations has alpha2*beta1 - alpha1*beta2 == 0.

    ``two_term`` holds the induced two-term relation when one exists.
    """

    def __init__(self, message, two_term=None):
        super().__init__(message)
        self.two_term = two_term


class InvalidShifts(InputError):
    pass


class DegenerateGamma(DomainError):
    pass


class ConstraintUnsolvable(DomainError):
    pass


# numerics
class Divergent(DomainError):
    pass


class NoConvergence(DomainError):
    pass


class SideDivergent(DomainError):
    def __init__(self, message, side):
        super().__init__(message)
        self.side = side


class SamplingExhausted(DomainError):
    pass


# cli
class SchemaViolation(InputError):
    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
