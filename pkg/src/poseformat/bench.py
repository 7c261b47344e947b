"""File-size and read-speed comparison of ``.pose`` against OpenPose JSON.

For each frame count a synthetic 137-point, single-person 2D pose is
serialized both ways. Timings are medians of wall-clock reads from
in-memory buffers:

* ``json``: ``json.loads`` of the monolithic document, no tensor building
* ``pose``: full ``read_pose`` (header + body)
* ``body``: body only, with the header length known in advance
"""
from __future__ import annotations

import json
import statistics
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .codec import decode_header, read_body, read_pose, write_pose
from .openpose import frames_to_json, openpose_header
from .structures import MaskedFrameTensor, Pose, PoseBody

DEFAULT_FRAMES = (1, 10, 100, 1000, 10000)
DEFAULT_REPS = 20
SEED = 1413451


@dataclass(frozen=True)
class BenchRow:
    frames: int
    json_size: int
    json_seconds: float
    pose_size: int
    pose_seconds: float
    body_seconds: float

    @property
    def size_ratio(self) -> float:
        return self.json_size / self.pose_size

    @property
    def speed_ratio(self) -> float:
        return self.json_seconds / self.pose_seconds

    def to_dict(self) -> dict:
        d = asdict(self)
        d["size_ratio"] = self.size_ratio
        d["speed_ratio"] = self.speed_ratio
        return d


@dataclass
class BenchReport:
    reps: int
    rows: list[BenchRow] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"reps": self.reps, "rows": [r.to_dict() for r in self.rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_table(self) -> str:
        head = ("# Frames", "JSON size", "JSON read", "pose size", "pose read",
                "body read", "size x", "speed x")
        lines = [head]
        for r in self.rows:
            lines.append((
                f"{r.frames:,}", human_bytes(r.json_size), human_seconds(r.json_seconds),
                human_bytes(r.pose_size), human_seconds(r.pose_seconds),
                human_seconds(r.body_seconds), f"{r.size_ratio:.2f}", f"{r.speed_ratio:.1f}",
            ))
        widths = [max(len(row[i]) for row in lines) for i in range(len(head))]
        return "\n".join("  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in lines)


def human_bytes(n: int) -> str:
    for unit in ("B", "KB", "MB", "GB"):
        if n < 1000 or unit == "GB":
            return f"{n:.0f} {unit}" if unit == "B" else f"{n:.3g} {unit}"
        n /= 1000
    return f"{n} B"  # unreachable


def human_seconds(s: float) -> str:
    if s >= 1:
        return f"{s:.3g} s"
    if s >= 1e-3:
        return f"{s * 1e3:.3g} ms"
    return f"{s * 1e6:.3g} us"


def synthetic_pose(frames: int, seed: int = SEED, width: int = 1280, height: int = 720) -> Pose:
    """137-point single-person 2D pose with every point present."""
    rng = np.random.default_rng(seed)
    header = openpose_header(137, width, height)
    k = header.total_points
    data = rng.uniform(0, 1, (frames, 1, k, 2)) * (width, height)
    conf = rng.uniform(0.05, 1.0, (frames, 1, k))
    return Pose(header, PoseBody(25, MaskedFrameTensor(data, conf)))


def openpose_json_bytes(pose: Pose) -> bytes:
    """Monolithic OpenPose-style JSON, 6 significant digits, compact separators."""
    return json.dumps(frames_to_json(pose, digits=6), separators=(",", ":")).encode()


def median_time(fn: Callable[[], object], reps: int) -> float:
    times = []
    for _ in range(reps):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return statistics.median(times)


def bench_frames(frames: int, reps: int = DEFAULT_REPS, seed: int = SEED) -> BenchRow:
    pose = synthetic_pose(frames, seed)
    pose_buf = write_pose(pose)
    json_buf = openpose_json_bytes(pose)
    header, header_size = decode_header(pose_buf)
    return BenchRow(
        frames=frames,
        json_size=len(json_buf),
        json_seconds=median_time(lambda: json.loads(json_buf), reps),
        pose_size=len(pose_buf),
        pose_seconds=median_time(lambda: read_pose(pose_buf), reps),
        body_seconds=median_time(lambda: read_body(pose_buf, header, header_size), reps),
    )


def bench_run(frames_list: Sequence[int] = DEFAULT_FRAMES, reps: int = DEFAULT_REPS,
              seed: int = SEED) -> BenchReport:
    if reps < 1:
        raise ValueError("reps must be >= 1")
    if any(f < 1 for f in frames_list):
        raise ValueError("frame counts must be >= 1")
    return BenchReport(reps, [bench_frames(f, reps, seed) for f in frames_list])
