"""Exception hierarchy for the land-eligibility engine."""


class LandEligError(Exception):
    """Base class for all engine errors."""


# --- spatial reference errors ---------------------------------------------

class AntipodalPoint(LandEligError):
    """Point is (numerically) antipodal to the projection center."""


class OutOfDomain(LandEligError):
    """Planar coordinates fall outside the projection's valid disk."""


class UnsupportedSrsPair(LandEligError):
    """No transform path exists between the two reference systems."""


# --- geometry errors -------------------------------------------------------

class NonPositiveSegment(LandEligError):
    """Segment length for densification must be > 0."""


class NegativeDistance(LandEligError):
    """Buffer distance must be >= 0."""


class InvalidRing(LandEligError):
    """Polygon ring is open, degenerate or otherwise malformed."""


class EmptyGeometry(LandEligError):
    """Operation requires a nonempty geometry."""


# --- raster errors ---------------------------------------------------------

class NoOverlap(LandEligError):
    """Clip target does not intersect the raster extent."""


class EmptyRange(LandEligError):
    """Indication range has min > max."""


class NoBound(LandEligError):
    """At least one bound (min or max) is required."""


class EmptyMask(LandEligError):
    """Distance transform needs at least one marked pixel."""


class ShapeMismatch(LandEligError):
    """Grids are not congruent (different georeference or shape)."""


class SrsMismatch(LandEligError):
    """Feature set and target grid use different reference systems."""


# --- vector errors ---------------------------------------------------------

class MalformedExpression(LandEligError):
    """Attribute filter expression could not be parsed."""


# --- exclusion errors ------------------------------------------------------

class EmptyRegion(LandEligError):
    """Region geometry is empty or has no area."""


# --- prior dataset errors --------------------------------------------------

class NonMonotoneEdges(LandEligError):
    """Edge list must be strictly increasing."""


class EmptyIndication(LandEligError):
    """Proximity source indicates no pixels at all."""


class WrongKind(LandEligError):
    """Operation is not defined for this criterion kind."""


# --- catalog errors --------------------------------------------------------

class UnknownCriterion(LandEligError):
    """Criterion name not present in the catalog."""


class MissingLevel(LandEligError):
    """Catalog entry has no threshold for the requested level."""


# --- workflow errors -------------------------------------------------------

class ConfigError(LandEligError):
    """Workflow configuration is missing, unreadable or invalid."""


class MissingFile(LandEligError):
    """A file referenced by the workflow does not exist."""
