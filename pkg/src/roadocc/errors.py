"""Exception types shared across the library."""


class RoadOccError(Exception):
    """Base class for all library errors."""


class DimensionError(RoadOccError):
    """A shape or axis constraint was violated (e.g. ROI exceeds image bounds)."""


class ConfigurationError(RoadOccError):
    """A parameter combination is invalid or unusable."""


class UnsupportedRepresentationError(RoadOccError):
    """The classifier cannot operate on features of this dimensionality."""


class AnnotationError(RoadOccError):
    """Annotation XML is malformed or violates the schema."""


class SingleClassError(RoadOccError):
    """ROC analysis requires both positive and negative ground-truth pixels."""
