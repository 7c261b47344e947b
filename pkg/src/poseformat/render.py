"""Skeleton rasterizer: still frames, PNG sequences and animated GIFs.

Coordinates are read as pixels of the header canvas. A point is drawn as a
filled disc with opacity equal to its confidence; a limb is drawn in its
start point's color, only when both ends hold data, with the smaller of the
two confidences as opacity.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from . import kernels
from .errors import UnsupportedOperationError
from .gif import encode_gif
from .structures import Pose

_PIXEL_LIMIT = 1 << 20


@dataclass(frozen=True)
class RenderOptions:
    background: tuple[int, int, int] = (255, 255, 255)
    point_radius: int | None = None  # None: max(1, round(min(w, h) / 150))
    scale: float = 1.0
    offset: tuple[float, float] = (0.0, 0.0)  # added after scaling, in pixels
    person: int | None = None  # None draws everyone

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError(f"scale must be > 0, got {self.scale}")
        if self.point_radius is not None and self.point_radius < 1:
            raise ValueError(f"point radius must be >= 1, got {self.point_radius}")

    def radius_for(self, width: int, height: int) -> int:
        if self.point_radius is not None:
            return int(self.point_radius)
        return max(1, round(min(width, height) / 150))


def _pixels(xy: np.ndarray, opts: RenderOptions) -> tuple[np.ndarray, np.ndarray]:
    px = xy[:, :2].astype(np.float64) * opts.scale + np.asarray(opts.offset, dtype=np.float64)
    finite = np.isfinite(px).all(axis=1)
    px = np.where(finite[:, None], px, 0.0)
    px = np.clip(np.floor(px + 0.5), -_PIXEL_LIMIT, _PIXEL_LIMIT).astype(np.int64)
    return px, finite


def render_frame(pose: Pose, frame: int, opts: RenderOptions | None = None) -> np.ndarray:
    """Rasterize one frame to an ``(height, width, 3)`` uint8 image."""
    opts = opts or RenderOptions()
    header = pose.header
    t = pose.body.tensor
    if not 0 <= frame < t.frames:
        raise IndexError(f"frame {frame} out of range for {t.frames} frames")
    w, h = header.width, header.height
    if w == 0 or h == 0:
        raise UnsupportedOperationError("header canvas is zero-sized")
    radius = opts.radius_for(w, h)
    canvas = np.empty((h, w, 3), dtype=np.float64)
    canvas[:] = np.asarray(opts.background, dtype=np.float64)

    people = range(t.people) if opts.person is None else [opts.person]
    for p in people:
        for comp in header.components:
            sl = header.component_slice(comp.name)
            pts, finite = _pixels(t.data[frame, p, sl], opts)
            alpha = np.where(finite, t.confidence[frame, p, sl], 0).astype(np.float64)
            n = len(comp.points)
            palette = np.asarray(comp.colors or ((0, 0, 0),), dtype=np.float64)
            pt_color = palette[np.arange(n) % len(palette)]
            limbs = np.asarray(comp.limbs, dtype=np.int64).reshape(-1, 2)
            limb_alpha = np.minimum(alpha[limbs[:, 0]], alpha[limbs[:, 1]])
            limb_color = np.ascontiguousarray(pt_color[limbs[:, 0]])
            kernels.rasterize(canvas, pts, pt_color, alpha, limbs, limb_color, limb_alpha, radius)
    return np.clip(np.floor(canvas + 0.5), 0, 255).astype(np.uint8)


def render_frames(pose: Pose, opts: RenderOptions | None = None) -> list[np.ndarray]:
    return [render_frame(pose, f, opts) for f in range(pose.body.frames)]


def png_bytes(image: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(image).save(buf, format="PNG")
    return buf.getvalue()


def save_png_frames(pose: Pose, directory, opts: RenderOptions | None = None) -> list[Path]:
    """Write ``frame_00000.png``, ``frame_00001.png``, ... into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    width = max(5, len(str(max(pose.body.frames - 1, 0))))
    paths = []
    for f in range(pose.body.frames):
        path = directory / f"frame_{f:0{width}d}.png"
        path.write_bytes(png_bytes(render_frame(pose, f, opts)))
        paths.append(path)
    return paths


def gif_delay(fps: int) -> int:
    """Per-frame delay in centiseconds."""
    return round(100 / fps)


def gif_bytes(pose: Pose, opts: RenderOptions | None = None) -> bytes:
    if pose.body.fps == 0:
        raise UnsupportedOperationError("cannot animate a pose with fps 0")
    if pose.body.frames == 0:
        raise UnsupportedOperationError("cannot animate a pose with no frames")
    return encode_gif(render_frames(pose, opts), gif_delay(pose.body.fps))


def render_gif(pose: Pose, path, opts: RenderOptions | None = None) -> Path:
    path = Path(path)
    path.write_bytes(gif_bytes(pose, opts))
    return path
