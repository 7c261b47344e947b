"""Exception hierarchy.

Everything raised on bad data derives from :class:`PoseError`, which is a
``ValueError`` so callers that only care about "bad input" can catch that.
"""


class PoseError(ValueError):
    pass


class InvalidHeaderError(PoseError):
    """Header fields violate a structural invariant."""


class FieldOverflowError(PoseError):
    """A value does not fit its fixed-width field."""


class TruncatedDataError(PoseError):
    pass


class UnsupportedVersionError(PoseError):
    pass


class CorruptLengthError(PoseError):
    """Body payload length is not a whole number of frames."""


class ShapeMismatchError(PoseError):
    pass


class UnknownPointError(PoseError, LookupError):
    def __init__(self, component: str, point: str):
        super().__init__(f"unknown point {component}:{point}")
        self.component = component
        self.point = point


class NoReferenceDataError(PoseError):
    pass


class DegenerateSkeletonError(PoseError):
    pass


class DegeneratePlaneError(PoseError):
    pass


class UnsupportedOperationError(PoseError):
    pass


class OpenPoseFormatError(PoseError):
    pass
