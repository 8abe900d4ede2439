"""Exception hierarchy.

Extractor failures derive from :class:`FaceMetricError`; the pipeline turns
them into invalid cells instead of dropping the face.
"""


class FaceMetricError(Exception):
    """Base class for per-face measurement failures."""


class DegenerateGeometry(FaceMetricError):
    pass


class DivisionDegenerate(FaceMetricError):
    pass


class NoEdges(FaceMetricError):
    pass


class EmptyRegion(FaceMetricError):
    pass


class NumericDegenerate(FaceMetricError):
    pass


class InvalidPose(FaceMetricError):
    pass


class InvalidDistribution(FaceMetricError, ValueError):
    pass


class NoVotes(FaceMetricError, ValueError):
    pass


class EmptyInput(ValueError):
    pass


class EmptyTable(ValueError):
    pass


class ImageReadError(FaceMetricError, OSError):
    pass


class ManifestParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
