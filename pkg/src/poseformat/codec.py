"""Bit-exact reader/writer for ``.pose`` v0.1 files.

Layout (all little-endian)::

    header:
        f32  version
        u16  width, height, depth
        u16  component count
        per component:
            str  name
            str  format
            u16  point count, limb count, color count
            str  point names ...
            u16  limb (from, to) ...
            u16  color (r, g, b) ...
    body:
        u16  fps
        u16  frame count (advisory; 0 when frames > 65535)
        u16  people
        f32  data[frames][people][points][dims]
        f32  confidence[frames][people][points]

``str`` is a u16 byte length followed by UTF-8 bytes. Readers infer the frame
count from the payload length and ignore the advisory field.
"""
from __future__ import annotations

import struct

import numpy as np

from .errors import (
    CorruptLengthError,
    FieldOverflowError,
    InvalidHeaderError,
    TruncatedDataError,
    UnsupportedVersionError,
)
from .structures import (
    U16_MAX,
    MaskedFrameTensor,
    Pose,
    PoseBody,
    PoseComponent,
    PoseHeader,
)

VERSION_TOLERANCE = 1e-4
BODY_PREFIX_SIZE = 6

_F32 = struct.Struct("<f")
_U16 = struct.Struct("<H")
_U16x2 = struct.Struct("<HH")
_U16x3 = struct.Struct("<HHH")


def _u16(value: int, what: str) -> bytes:
    if not 0 <= value <= U16_MAX:
        raise FieldOverflowError(f"{what}={value} does not fit in u16")
    return _U16.pack(value)


def _str(value: str, what: str) -> bytes:
    raw = value.encode("utf-8")
    if len(raw) > U16_MAX:
        raise FieldOverflowError(f"{what} is {len(raw)} bytes, longer than 65535")
    return _U16.pack(len(raw)) + raw


def encode_header(header: PoseHeader) -> bytes:
    parts = [
        _F32.pack(header.version),
        _U16x3.pack(header.width, header.height, header.depth),
        _u16(len(header.components), "component count"),
    ]
    for c in header.components:
        parts += [
            _str(c.name, "component name"),
            _str(c.format, f"{c.name} format"),
            _u16(len(c.points), f"{c.name} point count"),
            _u16(len(c.limbs), f"{c.name} limb count"),
            _u16(len(c.colors), f"{c.name} color count"),
        ]
        parts += [_str(p, f"{c.name} point name") for p in c.points]
        parts += [_U16x2.pack(*limb) for limb in c.limbs]
        parts += [_U16x3.pack(*color) for color in c.colors]
    return b"".join(parts)


class _Reader:
    __slots__ = ("buf", "pos")

    def __init__(self, buf, pos: int = 0):
        self.buf = buf
        self.pos = pos

    def take(self, n: int) -> memoryview:
        end = self.pos + n
        if end > len(self.buf):
            raise TruncatedDataError(
                f"need {n} bytes at offset {self.pos}, only {len(self.buf) - self.pos} left")
        out = self.buf[self.pos:end]
        self.pos = end
        return out

    def unpack(self, st: struct.Struct):
        return st.unpack(self.take(st.size))

    def u16(self) -> int:
        return self.unpack(_U16)[0]

    def string(self) -> str:
        raw = self.take(self.u16())
        try:
            return str(raw, "utf-8")
        except UnicodeDecodeError as e:
            raise InvalidHeaderError(f"string at offset {self.pos - len(raw)} is not UTF-8") from e


def decode_header(buf) -> tuple[PoseHeader, int]:
    """Parse a header from the start of ``buf``; returns it with the bytes consumed."""
    r = _Reader(memoryview(buf).cast("B"))
    (version,) = r.unpack(_F32)
    if not abs(version - 0.1) <= VERSION_TOLERANCE:
        raise UnsupportedVersionError(f"unsupported .pose version {version:g}")
    width, height, depth = r.unpack(_U16x3)
    components = []
    for _ in range(r.u16()):
        name = r.string()
        fmt = r.string()
        n_points, n_limbs, n_colors = r.unpack(_U16x3)
        points = [r.string() for _ in range(n_points)]
        limbs = [r.unpack(_U16x2) for _ in range(n_limbs)]
        colors = [r.unpack(_U16x3) for _ in range(n_colors)]
        components.append(PoseComponent(name, fmt, points, limbs, colors))
    header = PoseHeader(width, height, depth, components, version=version)
    return header, r.pos


def body_size(frames: int, people: int, points: int, dims: int) -> int:
    return BODY_PREFIX_SIZE + frames * people * points * (dims + 1) * 4


def encode_body(body: PoseBody) -> bytes:
    t = body.tensor
    advisory = t.frames if t.frames <= U16_MAX else 0
    prefix = _u16(body.fps, "fps") + _U16.pack(advisory) + _u16(t.people, "people")
    return b"".join((
        prefix,
        t.data.astype("<f4", copy=False).tobytes(),
        t.confidence.astype("<f4", copy=False).tobytes(),
    ))


def decode_body(buf, header: PoseHeader) -> PoseBody:
    """Parse a body; the frame count comes from the payload length.

    Arrays are zero-copy views of ``buf`` unless canonicalization has to
    rewrite them.
    """
    view = memoryview(buf).cast("B")
    if len(view) < BODY_PREFIX_SIZE:
        raise TruncatedDataError(f"body needs at least 6 bytes, got {len(view)}")
    fps, advisory, people = struct.unpack_from("<HHH", view)
    points = header.total_points
    dims = header.dims or 2
    payload = len(view) - BODY_PREFIX_SIZE
    per_frame = people * points * (dims + 1) * 4
    if per_frame == 0:
        # nothing to measure a frame by; the advisory count is the only source
        if payload:
            raise CorruptLengthError(f"{payload} payload bytes for an empty frame layout")
        frames = advisory
    else:
        frames, rem = divmod(payload, per_frame)
        if rem:
            raise CorruptLengthError(
                f"payload of {payload} bytes is not a multiple of {per_frame} bytes per frame")
    n_data = frames * people * points * dims
    data = np.frombuffer(view, dtype="<f4", count=n_data, offset=BODY_PREFIX_SIZE)
    conf = np.frombuffer(view, dtype="<f4", count=frames * people * points,
                         offset=BODY_PREFIX_SIZE + 4 * n_data)
    tensor = MaskedFrameTensor(
        data.reshape(frames, people, points, dims),
        conf.reshape(frames, people, points),
    )
    return PoseBody(fps, tensor)


def write_pose(pose: Pose) -> bytes:
    return encode_header(pose.header) + encode_body(pose.body)


def read_pose(buf) -> Pose:
    header, consumed = decode_header(buf)
    if not header.components:
        raise InvalidHeaderError("file declares no components")
    body = decode_body(memoryview(buf).cast("B")[consumed:], header)
    return Pose(header, body)


def read_body(buf, header: PoseHeader, header_size: int) -> PoseBody:
    """Decode only the body, skipping a header whose length is already known."""
    return decode_body(memoryview(buf).cast("B")[header_size:], header)


def load(path) -> Pose:
    with open(path, "rb") as f:
        return read_pose(f.read())


def save(pose: Pose, path) -> None:
    with open(path, "wb") as f:
        f.write(write_pose(pose))
