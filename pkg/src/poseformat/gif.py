"""Minimal animated GIF89a writer.

Every input frame becomes exactly one GIF frame (no merging of identical
frames), all sharing one global palette derived from the first frame.
"""
from __future__ import annotations

import struct

import numpy as np
from PIL import Image

from .kernels import lzw_encode


def _pack_rgb(rgb: np.ndarray) -> np.ndarray:
    rgb = rgb.astype(np.int64)
    return (rgb[:, 0] << 16) | (rgb[:, 1] << 8) | rgb[:, 2]


def build_palette(first: np.ndarray) -> np.ndarray:
    """Up to 256 RGB colors: exact if the first frame has few enough, else median cut."""
    keys = np.unique(_pack_rgb(first.reshape(-1, 3)))
    if len(keys) <= 256:
        return np.column_stack([keys >> 16, (keys >> 8) & 0xFF, keys & 0xFF]).astype(np.uint8)
    q = Image.fromarray(first).quantize(256, method=Image.Quantize.MEDIANCUT, dither=0)
    return np.asarray(q.getpalette()[:768], dtype=np.uint8).reshape(-1, 3)


def map_to_palette(frame: np.ndarray, palette: np.ndarray) -> np.ndarray:
    """Index of the nearest palette entry (squared RGB distance) for every pixel."""
    packed = _pack_rgb(frame.reshape(-1, 3))
    keys, inverse = np.unique(packed, return_inverse=True)
    colors = np.column_stack([keys >> 16, (keys >> 8) & 0xFF, keys & 0xFF])
    pal = palette.astype(np.int64)
    nearest = np.empty(len(colors), dtype=np.uint8)
    for start in range(0, len(colors), 4096):
        chunk = colors[start:start + 4096].astype(np.int64)
        d = ((chunk[:, None, :] - pal[None, :, :]) ** 2).sum(axis=-1)
        nearest[start:start + 4096] = d.argmin(axis=1)
    return nearest[inverse.reshape(-1)].reshape(frame.shape[:2])


def _sub_blocks(data: bytes) -> bytes:
    parts = []
    for i in range(0, len(data), 255):
        chunk = data[i:i + 255]
        parts.append(bytes([len(chunk)]) + chunk)
    parts.append(b"\x00")
    return b"".join(parts)


def encode_gif(frames: list[np.ndarray], delay_cs: int, loop: int = 0) -> bytes:
    """Encode ``(H, W, 3)`` uint8 frames as a looping animated GIF."""
    if not frames:
        raise ValueError("a GIF needs at least one frame")
    h, w, _ = frames[0].shape
    palette = build_palette(frames[0])
    bits = max(1, int(np.ceil(np.log2(max(len(palette), 2)))))
    table = np.zeros((1 << bits, 3), dtype=np.uint8)
    table[: len(palette)] = palette
    min_code_size = max(2, bits)

    out = [
        b"GIF89a",
        struct.pack("<HHBBB", w, h, 0xF0 | (bits - 1), 0, 0),
        table.tobytes(),
        b"\x21\xFF\x0BNETSCAPE2.0\x03\x01" + struct.pack("<H", loop) + b"\x00",
    ]
    for frame in frames:
        if frame.shape != (h, w, 3):
            raise ValueError("all frames must share one size")
        idx = map_to_palette(frame, palette)
        out.append(b"\x21\xF9\x04" + struct.pack("<BHB", 0x04, delay_cs, 0) + b"\x00")
        out.append(b"\x2C" + struct.pack("<HHHHB", 0, 0, w, h, 0))
        out.append(bytes([min_code_size]))
        out.append(_sub_blocks(lzw_encode(idx.reshape(-1), min_code_size)))
    out.append(b"\x3B")
    return b"".join(out)
