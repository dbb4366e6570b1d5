"""Exception hierarchy for the workbench.

Every failure mode that the library can diagnose gets its own class so
that callers (and the scenario runner) can convert them into readable
failed checks instead of tracebacks.
"""


class SklyaninError(Exception):
    """Base class for all workbench errors."""


# --- linear algebra ---------------------------------------------------------

class MixedLength(SklyaninError):
    """Vectors of different lengths passed to a span computation."""


class MixedAmbient(SklyaninError):
    """Subspaces of different ambient dimension combined."""


# --- curve / parameters -----------------------------------------------------

class DegenerateParams(SklyaninError):
    """(a, b, c) fail the nondegeneracy condition of the algebra."""


class SmallOrder(SklyaninError):
    """The translation point has order below the configured floor."""


class NotOnCurve(SklyaninError):
    """Point fails the cubic equation."""


class FormulaDegenerate(SklyaninError):
    """The rational automorphism formula is undefined at all probe points."""


class TranslationMismatch(SklyaninError):
    """The automorphism formula disagrees with translation by the bootstrapped point."""


class OrientationFailure(SklyaninError):
    """Neither (or both) product-twist orientations annihilate the relations on E."""


class NoPointFound(SklyaninError):
    """Deterministic point search exhausted its budget."""


class SingularPoint(SklyaninError):
    """Gradient of the cubic vanishes where a smooth point is required."""


# --- divisors ---------------------------------------------------------------

class OrbitAmbiguity(SklyaninError):
    """Two support points may be twist-related beyond the search bound."""


class NotVirtuallyEffective(SklyaninError):
    """Decomposition requested for a divisor failing the tail criterion."""


class NegativeMultiplicity(SklyaninError):
    """Normalised divisor would need a negative coefficient."""


# --- sections ---------------------------------------------------------------

class RankDeficit(SklyaninError):
    """An evaluation matrix missed its guaranteed rank (fatal misconfiguration)."""


class NonEffective(SklyaninError):
    """Vanishing conditions require an effective divisor."""


class ResidualDegreeZero(SklyaninError):
    """deg e = 3n boundary case: h^0 depends on linear equivalence, refused."""


class JetCapExceeded(SklyaninError):
    """Requested vanishing multiplicity exceeds the configured jet cap."""


# --- graded algebra ---------------------------------------------------------

class DimMismatch(SklyaninError):
    """A graded piece came out with an unexpected dimension."""


class WindowExceeded(SklyaninError):
    """Requested degree lies beyond the constructed window."""


class CentralityFailure(SklyaninError):
    """The degree-3 formula element is not central."""


class CentreDimUnexpected(SklyaninError):
    """The solved degree-3 centre is not 1-dimensional."""


# --- grassmannian -----------------------------------------------------------

class NotInOmega(SklyaninError):
    """Subspace tuple lies outside the generic intersection locus."""


# --- configuration / CLI ----------------------------------------------------

class ParseError(SklyaninError):
    """Malformed config or divisor expression."""


class ValidationError(SklyaninError):
    """Config parsed but violates a constraint."""


class UnknownPoint(SklyaninError):
    """Divisor expression references an undeclared point name."""


class CorruptCache(SklyaninError):
    """Cache file failed its checksum."""
