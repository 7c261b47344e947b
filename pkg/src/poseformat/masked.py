"""Primitives over confidence-masked pose tensors.

All functions return new tensors; inputs are never modified.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ShapeMismatchError
from .structures import MaskedFrameTensor


def new_zeroed(frames: int, people: int, points: int, dims: int) -> MaskedFrameTensor:
    """A fully masked tensor of the given extents."""
    if dims not in (2, 3):
        raise ShapeMismatchError(f"dims must be 2 or 3, got {dims}")
    if min(frames, people, points) < 0:
        raise ShapeMismatchError("extents must be non-negative")
    return MaskedFrameTensor(
        np.zeros((frames, people, points, dims), dtype=np.float32),
        np.zeros((frames, people, points), dtype=np.float32),
    )


def apply_affine(t: MaskedFrameTensor, matrix, offset=None) -> MaskedFrameTensor:
    """Map every unmasked coordinate ``x`` to ``matrix @ x + offset``.

    Computed in float64 and stored back as float32. Masked slots stay at
    zero and confidences pass through untouched.
    """
    m = np.asarray(matrix, dtype=np.float64)
    b = np.zeros(t.dims) if offset is None else np.asarray(offset, dtype=np.float64)
    if m.shape != (t.dims, t.dims) or b.shape != (t.dims,):
        raise ShapeMismatchError(
            f"affine of shape {m.shape}/{b.shape} does not fit {t.dims}-d points")
    out = t.data.astype(np.float64) @ m.T + b
    out[~t.mask] = 0
    return MaskedFrameTensor(out.astype(np.float32), t.confidence)


def unmasked_mean(t: MaskedFrameTensor, point: int) -> tuple[np.ndarray | None, int]:
    """Mean position of ``point`` over all (frame, person) slots holding data.

    Returns ``(mean, count)``; ``mean`` is None when no slot is valid.
    """
    if not 0 <= point < t.points:
        raise IndexError(f"point {point} out of range for {t.points} points")
    valid = t.confidence[:, :, point] > 0
    count = int(valid.sum())
    if count == 0:
        return None, 0
    return t.data[:, :, point][valid].astype(np.float64).mean(axis=0), count


def select_points(t: MaskedFrameTensor, indices: Sequence[int]) -> MaskedFrameTensor:
    """Restrict to the given strictly increasing point indices (copying)."""
    idx = np.asarray(indices, dtype=np.int64).reshape(-1)
    if idx.size:
        if idx[0] < 0 or idx[-1] >= t.points:
            raise IndexError(f"point indices out of range for {t.points} points")
        if np.any(np.diff(idx) <= 0):
            raise ValueError("point indices must be strictly increasing")
    return MaskedFrameTensor(t.data[:, :, idx].copy(), t.confidence[:, :, idx].copy())


def select_frames(t: MaskedFrameTensor, frames: Sequence[int]) -> MaskedFrameTensor:
    idx = np.asarray(frames, dtype=np.int64).reshape(-1)
    return MaskedFrameTensor(t.data[idx].copy(), t.confidence[idx].copy())


def add_noise(t: MaskedFrameTensor, noise) -> MaskedFrameTensor:
    """Add ``noise`` (same shape as the data) to unmasked coordinates only."""
    out = t.data.astype(np.float64) + np.asarray(noise, dtype=np.float64)
    out[~t.mask] = 0
    return MaskedFrameTensor(out.astype(np.float32), t.confidence)
