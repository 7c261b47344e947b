"""Regenerate the files under fixtures/.

    python scripts/make_fixtures.py

Output is deterministic; running it twice yields identical bytes.
"""
import json
from pathlib import Path

import numpy as np

from poseformat import codec
from poseformat.openpose import COMPONENT_KEYS, openpose_header
from poseformat.structures import MaskedFrameTensor, Pose, PoseBody

ROOT = Path(__file__).resolve().parent.parent / "fixtures"


def golden_pose() -> Pose:
    header = openpose_header(137, 640, 480)
    rng = np.random.default_rng(137)
    k = header.total_points
    data = np.round(rng.uniform(0, 1, (2, 1, k, 2)) * (640, 480), 2)
    conf = np.round(rng.uniform(0.1, 1.0, (2, 1, k)), 3)
    conf[1, 0, ::10] = 0  # a few masked points in the second frame
    return Pose(header, PoseBody(25, MaskedFrameTensor(data, conf)))


def _person(rng, masked=(), boost=()):
    person = {"person_id": [-1]}
    for comp in openpose_header(137).components:
        n = len(comp.points)
        xy = np.round(rng.uniform(0, 500, (n, 2)), 3)
        c = np.round(rng.uniform(0.05, 1.0, (n, 1)), 4)
        tri = np.concatenate([xy, c], axis=1)
        if comp.name == "BODY_25":
            for i in masked:
                tri[i, 2] = 0.0
            for i in boost:
                tri[i, 2] = 1.25  # out-of-range confidence, clamped on ingest
        person[COMPONENT_KEYS[comp.name]] = tri.reshape(-1).tolist()
    return person


def openpose_frames():
    rng = np.random.default_rng(2023)
    return [
        {"version": 1.3, "people": [_person(rng, masked=(0, 4))]},
        {"version": 1.3, "people": [_person(rng), _person(rng, boost=(2,)), _person(rng)]},
        {"version": 1.3, "people": []},
    ]


def hexdump(buf: bytes, n: int = 64) -> str:
    lines = []
    for off in range(0, min(n, len(buf)), 16):
        chunk = buf[off:off + 16]
        hexes = " ".join(f"{b:02x}" for b in chunk)
        text = "".join(chr(b) if 32 <= b < 127 else "." for b in chunk)
        lines.append(f"{off:08x}  {hexes:<47}  |{text}|")
    return "\n".join(lines)


def main():
    ROOT.mkdir(exist_ok=True)
    buf = codec.write_pose(golden_pose())
    (ROOT / "openpose_137.pose").write_bytes(buf)

    frames = openpose_frames()
    frame_dir = ROOT / "openpose_3frames"
    frame_dir.mkdir(exist_ok=True)
    for i, frame in enumerate(frames):
        (frame_dir / f"clip_{i:012d}_keypoints.json").write_text(json.dumps(frame))
    (ROOT / "openpose_3frames.json").write_text(json.dumps(frames))

    (ROOT / "openpose_137.hex").write_text(hexdump(buf) + "\n")
    print(f"openpose_137.pose: {len(buf)} bytes")
    print(hexdump(buf))


if __name__ == "__main__":
    main()
