"""Exception types shared across the library.

Every domain failure raises a subclass of DomainError so callers (and the
CLI) can distinguish expected mathematical failure modes from bugs.
"""


class DomainError(Exception):
    """Base class for all expected failure modes."""


class NotInvertible(DomainError):
    """gcd(a, m) != 1, so a has no inverse modulo m."""


class NotASquare(DomainError):
    """Requested a modular square root of a non-residue."""


class NotFundamental(DomainError):
    """Discriminant fails the fundamental-discriminant conditions."""


class NoPrimesPossible(DomainError):
    """d = 7 (mod 8): no prime p with 4p = t^2 + d exists."""


class SearchLimitExceeded(DomainError):
    """Prime search passed its trace cap without meeting the target."""


class SpecialJ(DomainError):
    """j is 0 or 1728 mod p, where the generic curve model degenerates."""


class TooLarge(DomainError):
    """Field too large for the exhaustive point count."""


class Ambiguous(DomainError):
    """Group order could not be pinned down to a single candidate."""


class NotANonResidue(DomainError):
    """Twisting constant is a square mod p."""


class WrongCount(DomainError):
    """Number of surviving j-invariants differs from the class number.

    This is a hard internal-consistency failure: it means either an invalid
    discriminant slipped through validation or point counting is broken.
    Runs abort rather than patch over it.
    """


class NotCoprime(DomainError):
    """Two CRT moduli share a common factor."""


class ModulusDividesN(DomainError):
    """A CRT modulus shares a factor with the target modulus n.

    Only raised in strict mode; the default basis construction falls back
    to direct products and flags the basis instead.
    """


class PrecisionBudgetExceeded(DomainError):
    """Fixed-point error budget would exceed epsilon (internal assertion)."""


class OutsideHasse(DomainError):
    """Requested group order lies outside [p+1-2*sqrt(p), p+1+2*sqrt(p)]."""


class ZeroTrace(DomainError):
    """Trace t = 0 (supersingular target), which is unsupported."""


class NoRoot(DomainError):
    """Polynomial has no root in the prime field."""
