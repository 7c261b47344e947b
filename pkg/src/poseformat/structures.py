"""In-memory pose document: header (skeleton schema) and body (masked tensor)."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    InvalidHeaderError,
    ShapeMismatchError,
    UnknownPointError,
)

FORMAT_VERSION = 0.1
U16_MAX = 0xFFFF


def _as_float32_version(version: float) -> float:
    # the file stores a float32; keep the in-memory value identical to what round-trips
    return float(np.float32(version))


@dataclass(frozen=True)
class PoseComponent:
    """A named group of keypoints with its own limb graph and color table.

    ``format`` holds one character per channel, e.g. ``"XYC"`` for 2D points
    with confidence or ``"XYZC"`` for 3D.
    """

    name: str
    format: str
    points: tuple[str, ...]
    limbs: tuple[tuple[int, int], ...] = ()
    colors: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(str(p) for p in self.points))
        limbs = []
        for limb in self.limbs:
            limb = tuple(int(i) for i in limb)
            if len(limb) != 2:
                raise InvalidHeaderError(f"{self.name}: limb {limb} is not a pair")
            limbs.append(limb)
        object.__setattr__(self, "limbs", tuple(limbs))
        colors = []
        for color in self.colors:
            color = tuple(int(c) for c in color)
            if len(color) != 3:
                raise InvalidHeaderError(f"{self.name}: color {color} is not an RGB triple")
            if any(c < 0 or c > 255 for c in color):
                raise InvalidHeaderError(f"{self.name}: color {color} outside 0..255")
            colors.append(color)
        object.__setattr__(self, "colors", tuple(colors))

        if not self.format or self.format[-1] != "C":
            raise InvalidHeaderError(f"{self.name}: format {self.format!r} must end with 'C'")
        if len(self.format) - 1 not in (2, 3):
            raise InvalidHeaderError(f"{self.name}: format {self.format!r} must have 2 or 3 dims")
        if len(set(self.points)) != len(self.points):
            raise InvalidHeaderError(f"{self.name}: duplicate point names")
        n = len(self.points)
        for a, b in self.limbs:
            if not (0 <= a < n and 0 <= b < n):
                raise InvalidHeaderError(
                    f"{self.name}: limb ({a}, {b}) out of range for {n} points")

    @property
    def dims(self) -> int:
        return len(self.format) - 1

    def point_index(self, point: str) -> int:
        try:
            return self.points.index(point)
        except ValueError:
            raise UnknownPointError(self.name, point) from None


@dataclass(frozen=True)
class PoseHeader:
    width: int
    height: int
    depth: int = 0
    components: tuple[PoseComponent, ...] = ()
    version: float = FORMAT_VERSION

    def __post_init__(self):
        object.__setattr__(self, "version", _as_float32_version(self.version))
        object.__setattr__(self, "components", tuple(self.components))
        for name in ("width", "height", "depth"):
            v = int(getattr(self, name))
            if not 0 <= v <= U16_MAX:
                raise InvalidHeaderError(f"{name}={v} does not fit in u16")
            object.__setattr__(self, name, v)
        if len({c.dims for c in self.components}) > 1:
            raise InvalidHeaderError("components mix 2D and 3D formats")

    @property
    def dims(self) -> int | None:
        """Shared coordinate dimensionality, or None for an empty header."""
        return self.components[0].dims if self.components else None

    @property
    def total_points(self) -> int:
        return sum(len(c.points) for c in self.components)

    @cached_property
    def offsets(self) -> dict[str, int]:
        out, start = {}, 0
        for c in self.components:
            out[c.name] = start
            start += len(c.points)
        return out

    def component(self, name: str) -> PoseComponent:
        for c in self.components:
            if c.name == name:
                return c
        raise UnknownPointError(name, "*")

    def point_index(self, component: str, point: str) -> int:
        """Flat index of ``point`` across all components."""
        comp = next((c for c in self.components if c.name == component), None)
        if comp is None:
            raise UnknownPointError(component, point)
        return self.offsets[component] + comp.point_index(point)

    def component_slice(self, name: str) -> slice:
        start = self.offsets[self.component(name).name]
        return slice(start, start + len(self.component(name).points))


def _frozen_array(arr, ndim: int) -> np.ndarray:
    out = np.asarray(arr, dtype=np.float32)
    if out is arr and out.flags.writeable:
        out = out.copy()
    if out.ndim != ndim:
        raise ShapeMismatchError(f"expected a {ndim}-d array, got shape {out.shape}")
    out.flags.writeable = False
    return out


class MaskedFrameTensor:
    """Coordinates ``(frames, people, points, dims)`` plus confidence ``(frames, people, points)``.

    A slot with confidence 0 is masked and its coordinates are exactly 0.
    Construction clamps confidences into [0, 1] (NaN becomes 0) and zeroes
    masked coordinates; arrays are stored read-only.
    """

    __slots__ = ("data", "confidence")

    def __init__(self, data, confidence):
        data = _frozen_array(data, 4)
        conf = _frozen_array(confidence, 3)
        if data.shape[:3] != conf.shape:
            raise ShapeMismatchError(
                f"data extents {data.shape[:3]} disagree with confidence {conf.shape}")
        if data.shape[3] not in (2, 3):
            raise ShapeMismatchError(f"dims must be 2 or 3, got {data.shape[3]}")
        data, conf = _canonicalize(data, conf)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "confidence", conf)

    def __setattr__(self, name, value):
        raise AttributeError("MaskedFrameTensor is immutable")

    @property
    def frames(self) -> int:
        return self.data.shape[0]

    @property
    def people(self) -> int:
        return self.data.shape[1]

    @property
    def points(self) -> int:
        return self.data.shape[2]

    @property
    def dims(self) -> int:
        return self.data.shape[3]

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return self.data.shape

    @property
    def mask(self) -> np.ndarray:
        """Boolean ``(frames, people, points)``; True where the slot holds data."""
        return self.confidence > 0

    def __eq__(self, other):
        if not isinstance(other, MaskedFrameTensor):
            return NotImplemented
        return (self.data.shape == other.data.shape
                and np.array_equal(self.data, other.data, equal_nan=True)
                and np.array_equal(self.confidence, other.confidence, equal_nan=True))

    __hash__ = None

    def __repr__(self):
        f, p, k, d = self.shape
        return f"MaskedFrameTensor(frames={f}, people={p}, points={k}, dims={d})"


def _canonicalize(data: np.ndarray, conf: np.ndarray):
    bad_conf = ~((conf >= 0) & (conf <= 1))
    if bad_conf.any():
        conf = np.nan_to_num(np.clip(conf, 0, 1), nan=0.0)
        conf.flags.writeable = False
    masked = conf == 0
    if masked.any() and (data[masked] != 0).any():
        data = data.copy()
        data[masked] = 0
        data.flags.writeable = False
    return data, conf


@dataclass(frozen=True)
class PoseBody:
    fps: int
    tensor: MaskedFrameTensor

    def __post_init__(self):
        fps = int(self.fps)
        if not 0 <= fps <= U16_MAX:
            raise ShapeMismatchError(f"fps={fps} does not fit in u16")
        object.__setattr__(self, "fps", fps)

    @property
    def people(self) -> int:
        return self.tensor.people

    @property
    def frames(self) -> int:
        return self.tensor.frames


@dataclass(frozen=True)
class Pose:
    header: PoseHeader
    body: PoseBody = field(repr=False)

    def __post_init__(self):
        t = self.body.tensor
        if self.header.total_points != t.points:
            raise ShapeMismatchError(
                f"header declares {self.header.total_points} points, tensor has {t.points}")
        if self.header.components and self.header.dims != t.dims:
            raise ShapeMismatchError(
                f"header dims {self.header.dims} != tensor dims {t.dims}")

    def with_tensor(self, tensor: MaskedFrameTensor, fps: int | None = None) -> Pose:
        return Pose(self.header, PoseBody(self.body.fps if fps is None else fps, tensor))


def point_indices(header: PoseHeader, names: Iterable[Sequence[str]]) -> list[int]:
    return [header.point_index(c, p) for c, p in names]
