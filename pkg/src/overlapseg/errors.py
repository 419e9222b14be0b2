"""Exception types raised by the segmentation pipeline."""


class SegmentationError(Exception):
    """Base class for all pipeline errors."""


class DimensionError(SegmentationError, ValueError):
    pass


class ParameterError(SegmentationError, ValueError):
    pass


class DegenerateHistogramError(SegmentationError, ValueError):
    """Raised when an image has a single intensity and cannot be thresholded."""


class AmbiguousOrientationError(SegmentationError, ValueError):
    """Raised when corner orientation signs cancel exactly."""


class InsufficientPointsError(SegmentationError, ValueError):
    pass


class DegenerateFitError(SegmentationError, ValueError):
    """Raised when a point set does not determine an ellipse."""


class PlacementError(SegmentationError, RuntimeError):
    """Raised when a synthetic scene cannot be placed under its constraints."""


class UndefinedReportError(SegmentationError, ValueError):
    pass
