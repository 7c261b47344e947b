"""Normalization, plane alignment, frame-rate resampling and augmentation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import kernels
from .errors import (
    DegeneratePlaneError,
    DegenerateSkeletonError,
    NoReferenceDataError,
    PoseError,
    ShapeMismatchError,
    UnsupportedOperationError,
)
from .masked import add_noise, apply_affine, select_frames, unmasked_mean
from .structures import MaskedFrameTensor, Pose

PointName = tuple[str, str]  # (component, point)


@dataclass(frozen=True)
class NormalizationInfo:
    left: PointName
    right: PointName


def normalize(pose: Pose, info: NormalizationInfo) -> Pose:
    """Scale and shift so the mean reference distance is 1 and the mean midpoint is the origin.

    Statistics are pooled over every (frame, person) slot where both
    reference points hold data.
    """
    left = pose.header.point_index(*info.left)
    right = pose.header.point_index(*info.right)
    if left == right:
        raise PoseError("normalization reference points must differ")
    t = pose.body.tensor
    conf = t.confidence
    valid = (conf[:, :, left] > 0) & (conf[:, :, right] > 0)
    if not valid.any():
        raise NoReferenceDataError(
            f"no frame has both {':'.join(info.left)} and {':'.join(info.right)}")
    a = t.data[:, :, left][valid].astype(np.float64)
    b = t.data[:, :, right][valid].astype(np.float64)
    mean_dist = np.linalg.norm(a - b, axis=-1).mean()
    if mean_dist == 0:
        raise DegenerateSkeletonError("reference points coincide in every frame")
    center = ((a + b) / 2).mean(axis=0)
    scale = 1.0 / mean_dist
    return pose.with_tensor(apply_affine(t, scale * np.eye(t.dims), -scale * center))


def rotation_between(n: np.ndarray, target=(0.0, 0.0, 1.0)) -> np.ndarray:
    """Rotation matrix taking unit vector ``n`` onto unit vector ``target`` (Rodrigues)."""
    n = np.asarray(n, dtype=np.float64)
    z = np.asarray(target, dtype=np.float64)
    axis = np.cross(n, z)
    s = np.linalg.norm(axis)
    c = float(np.clip(n @ z, -1.0, 1.0))
    if s < 1e-12:
        if c > 0:
            return np.eye(3)
        # antiparallel: half turn about an axis perpendicular to the target
        perp = np.array([1.0, 0.0, 0.0]) if abs(z[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        perp -= (perp @ z) * z
        perp /= np.linalg.norm(perp)
        return 2.0 * np.outer(perp, perp) - np.eye(3)
    k = axis / s
    kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + s * kx + (1 - c) * (kx @ kx)


def rotate_to_plane(pose: Pose, p1: PointName, p2: PointName, p3: PointName) -> Pose:
    """Rotate about the origin so the plane through the three mean points is parallel to z = const."""
    t = pose.body.tensor
    if t.dims != 3:
        raise UnsupportedOperationError("plane alignment needs 3D points")
    means = []
    for name in (p1, p2, p3):
        mean, _ = unmasked_mean(t, pose.header.point_index(*name))
        if mean is None:
            raise NoReferenceDataError(f"{':'.join(name)} never holds data")
        means.append(mean)
    a, b, c = means
    normal = np.cross(b - a, c - a)
    norm = np.linalg.norm(normal)
    extent = max(np.linalg.norm(b - a), np.linalg.norm(c - a))
    if extent == 0 or norm <= 1e-9 * extent * extent:
        raise DegeneratePlaneError("the three reference points are collinear")
    return pose.with_tensor(apply_affine(t, rotation_between(normal / norm)))


def resample_times(frames: int, fps: int, new_fps: int) -> np.ndarray:
    """Source-frame times sampled by the output frames."""
    last = (frames - 1) * new_fps // fps
    return np.arange(last + 1, dtype=np.float64) * fps / new_fps


def interpolate_fps(pose: Pose, new_fps: int) -> Pose:
    """Resample to ``new_fps`` by linear interpolation.

    Coordinates interpolate over each point's valid frames only (holding the
    nearest valid value past either end), while confidence interpolates the
    raw per-frame signal, gaps included. Output slots whose confidence comes
    out 0 are masked.
    """
    fps = pose.body.fps
    if fps == 0:
        raise UnsupportedOperationError("cannot resample a single-image pose (fps 0)")
    if new_fps < 1:
        raise ValueError(f"new fps must be >= 1, got {new_fps}")
    t = pose.body.tensor
    if t.frames == 0:
        raise UnsupportedOperationError("cannot resample an empty pose")
    f, p, k, d = t.shape
    times = resample_times(f, fps, new_fps)
    coords, _ = kernels.resample_series(
        t.data.reshape(f, p * k, d).astype(np.float64),
        t.mask.reshape(f, p * k),
        times,
    )
    conf, _ = kernels.resample_series(
        t.confidence.reshape(f, p * k, 1).astype(np.float64),
        np.ones((f, p * k), dtype=np.bool_),
        times,
    )
    out = MaskedFrameTensor(
        coords.reshape(len(times), p, k, d).astype(np.float32),
        conf.reshape(len(times), p, k).astype(np.float32),
    )
    return pose.with_tensor(out, fps=new_fps)


def frame_dropout(pose: Pose, probability: float, seed: int) -> tuple[Pose, np.ndarray]:
    """Drop each frame independently with ``probability``; at least one frame survives.

    Returns the shortened pose and the sorted indices of dropped frames.
    """
    if not 0 <= probability <= 1:
        raise ValueError(f"dropout probability {probability} outside [0, 1]")
    t = pose.body.tensor
    if t.frames == 0:
        raise UnsupportedOperationError("cannot drop frames from an empty pose")
    rng = np.random.default_rng(seed)
    keep = rng.random(t.frames) >= probability
    if not keep.any():
        keep[rng.integers(t.frames)] = True
    dropped = np.flatnonzero(~keep)
    return pose.with_tensor(select_frames(t, np.flatnonzero(keep))), dropped


# ---------------------------------------------------------------- augmentation steps

@dataclass(frozen=True)
class Affine:
    matrix: tuple
    offset: tuple | None = None

    def matrices(self, dims):
        m = np.asarray(self.matrix, dtype=np.float64)
        b = None if self.offset is None else np.asarray(self.offset, dtype=np.float64)
        return m, b


@dataclass(frozen=True)
class Rotate:
    """Counter-clockwise rotation in the xy plane (about z in 3D), radians."""
    angle: float

    def matrices(self, dims):
        c, s = math.cos(self.angle), math.sin(self.angle)
        m = np.eye(dims)
        m[:2, :2] = [[c, -s], [s, c]]
        return m, None


@dataclass(frozen=True)
class Scale:
    sx: float
    sy: float
    sz: float = 1.0

    def matrices(self, dims):
        return np.diag([self.sx, self.sy, self.sz][:dims]), None


@dataclass(frozen=True)
class Translate:
    offset: tuple

    def matrices(self, dims):
        return np.eye(dims), np.asarray(self.offset, dtype=np.float64)


@dataclass(frozen=True)
class Shear:
    kx: float
    ky: float

    def matrices(self, dims):
        m = np.eye(dims)
        m[0, 1], m[1, 0] = self.kx, self.ky
        return m, None


@dataclass(frozen=True)
class Reflect:
    axis: int  # 0 = x, 1 = y, 2 = z

    def matrices(self, dims):
        if not 0 <= self.axis < dims:
            raise ShapeMismatchError(f"cannot reflect axis {self.axis} of {dims}-d points")
        m = np.eye(dims)
        m[self.axis, self.axis] = -1
        return m, None


@dataclass(frozen=True)
class Noise:
    stddev: float
    seed: int

    def __post_init__(self):
        if self.stddev < 0:
            raise ValueError(f"noise stddev must be >= 0, got {self.stddev}")


@dataclass(frozen=True)
class FrameDropout:
    probability: float
    seed: int

    def __post_init__(self):
        if not 0 <= self.probability <= 1:
            raise ValueError(f"dropout probability {self.probability} outside [0, 1]")


@dataclass(frozen=True)
class Interpolate:
    fps: int

    def __post_init__(self):
        if self.fps < 1:
            raise ValueError(f"interpolation fps must be >= 1, got {self.fps}")


Step = Union[Affine, Rotate, Scale, Translate, Shear, Reflect, Noise, FrameDropout, Interpolate]

_STEP_TYPES = {
    "affine": Affine, "rotate": Rotate, "scale": Scale, "translate": Translate,
    "shear": Shear, "reflect": Reflect, "noise": Noise, "dropout": FrameDropout,
    "interpolate": Interpolate,
}
_AXES = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True)
class AugmentationSpec:
    steps: tuple[Step, ...] = ()

    @classmethod
    def from_dict(cls, obj) -> AugmentationSpec:
        """Build from JSON-style data: ``{"steps": [{"op": "rotate", "degrees": 15}, ...]}``.

        A bare list of steps is accepted too.
        """
        raw = obj["steps"] if isinstance(obj, dict) else obj
        steps = []
        for item in raw:
            item = dict(item)
            op = item.pop("op", None)
            if op not in _STEP_TYPES:
                raise ValueError(f"unknown augmentation op {op!r}")
            if op == "rotate" and "degrees" in item:
                item["angle"] = math.radians(item.pop("degrees"))
            if op == "reflect" and isinstance(item.get("axis"), str):
                item["axis"] = _AXES[item["axis"]]
            for key in ("matrix", "offset"):
                if isinstance(item.get(key), list):
                    item[key] = _tuplify(item[key])
            try:
                steps.append(_STEP_TYPES[op](**item))
            except TypeError as e:
                raise ValueError(f"bad arguments for {op}: {e}") from None
        return cls(tuple(steps))


def _tuplify(x):
    return tuple(_tuplify(v) for v in x) if isinstance(x, (list, tuple)) else x


def augment(pose: Pose, spec: AugmentationSpec | Sequence[Step]) -> Pose:
    """Apply the steps left to right."""
    steps = spec.steps if isinstance(spec, AugmentationSpec) else tuple(spec)
    for step in steps:
        t = pose.body.tensor
        if isinstance(step, Noise):
            rng = np.random.default_rng(step.seed)
            pose = pose.with_tensor(add_noise(t, rng.normal(0.0, step.stddev, t.shape)))
        elif isinstance(step, FrameDropout):
            pose, _ = frame_dropout(pose, step.probability, step.seed)
        elif isinstance(step, Interpolate):
            pose = interpolate_fps(pose, step.fps)
        else:
            pose = pose.with_tensor(apply_affine(t, *step.matrices(t.dims)))
    return pose
