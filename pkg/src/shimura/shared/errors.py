"""
Error hierarchy for the shimura package.

Every failure raised by the library derives from ShimuraError, which is a
ValueError so callers validating inputs can keep catching ValueError.
"""


class ShimuraError(ValueError):
    """Base class for all library errors"""


# core
class UnfactoredResidue(ShimuraError):
    """A cofactor beyond the trial-division bound could not be classified"""


class DegreeTooHigh(ShimuraError):
    """Polynomial degree exceeds what closed-form factorisation supports"""


class DegreeUnsupported(ShimuraError):
    """Operation is only defined for a fixed range of degrees"""


# models
class SingularJacobian(ShimuraError):
    pass


class PointNotOnCurve(ShimuraError):
    pass


class CaseOther(ShimuraError):
    """Model is neither even nor of the palindromic-twist shape"""


class NotARoot(ShimuraError):
    pass


class NotTwoTorsion(ShimuraError):
    pass


# fields
class RepeatedRoots(ShimuraError):
    pass


class DegenerateSpec(ShimuraError):
    """Nested radical collapses to a quadratic field"""


# classfield
class BadDiscriminant(ShimuraError):
    pass


class DiscMismatch(ShimuraError):
    pass


class NotCoprime(ShimuraError):
    pass


class NotASubgroup(ShimuraError):
    pass


class NoClassFound(ShimuraError):
    """No ideal class satisfies the quaternion-algebra condition"""


# curves
class InvalidLevel(ShimuraError):
    """D is not a product of an even number of distinct primes, or gcd(D, N) != 1"""


class DisOne(InvalidLevel):
    pass


class NonIntegralGenus(ShimuraError):
    pass


class NSquarefreeRequired(ShimuraError):
    pass


class MEqualsOne(ShimuraError):
    pass


class MNotInGroup(ShimuraError):
    pass


class EmptyLocus(ShimuraError):
    pass


# catalog
class CorruptData(ShimuraError):
    """Data file failed schema validation or checksum"""
