"""Reader/writer for the ``.pose`` v0.1 keypoint container and tools around it."""
from ._accel import backend
from .codec import (
    decode_body,
    decode_header,
    encode_body,
    encode_header,
    load,
    read_pose,
    save,
    write_pose,
)
from .errors import *  # noqa: F401,F403
from .masked import apply_affine, new_zeroed, select_points, unmasked_mean
from .openpose import openpose_header, parse_openpose, parse_openpose_directory
from .ops import (
    AugmentationSpec,
    NormalizationInfo,
    augment,
    frame_dropout,
    interpolate_fps,
    normalize,
    rotate_to_plane,
)
from .structures import MaskedFrameTensor, Pose, PoseBody, PoseComponent, PoseHeader

__version__ = "0.1.0"
