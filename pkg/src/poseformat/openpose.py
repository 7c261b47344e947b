"""OpenPose JSON ingestion.

Skeleton tables follow the OpenPose BODY_25 / face / hand conventions. The
135-point variant drops the two synthesized body points (Neck, MidHip) and
joins the torso directly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import OpenPoseFormatError
from .structures import MaskedFrameTensor, Pose, PoseBody, PoseComponent, PoseHeader

BODY_25_POINTS = (
    "Nose", "Neck", "RShoulder", "RElbow", "RWrist", "LShoulder", "LElbow", "LWrist",
    "MidHip", "RHip", "RKnee", "RAnkle", "LHip", "LKnee", "LAnkle", "REye", "LEye",
    "REar", "LEar", "LBigToe", "LSmallToe", "LHeel", "RBigToe", "RSmallToe", "RHeel",
)
BODY_25_LIMBS = (
    (1, 8), (1, 2), (1, 5), (2, 3), (3, 4), (5, 6), (6, 7), (8, 9), (9, 10), (10, 11),
    (8, 12), (12, 13), (13, 14), (1, 0), (0, 15), (15, 17), (0, 16), (16, 18),
    (14, 19), (19, 20), (14, 21), (11, 22), (22, 23), (11, 24),
)
BODY_25_COLORS = (
    (255, 0, 85), (255, 0, 0), (255, 85, 0), (255, 170, 0), (255, 255, 0), (170, 255, 0),
    (85, 255, 0), (0, 255, 0), (255, 0, 0), (0, 255, 85), (0, 255, 170), (0, 255, 255),
    (0, 170, 255), (0, 85, 255), (0, 0, 255), (255, 0, 170), (170, 0, 255), (255, 0, 255),
    (85, 0, 255), (0, 0, 255), (0, 0, 255), (0, 0, 255), (0, 255, 255), (0, 255, 255),
    (0, 255, 255),
)

_SYNTHETIC_BODY_POINTS = ("Neck", "MidHip")
_TORSO_LIMBS_23 = (("RShoulder", "LShoulder"), ("RHip", "LHip"),
                   ("RShoulder", "RHip"), ("LShoulder", "LHip"))


def _chain(start, stop, closed=False):
    out = [(i, i + 1) for i in range(start, stop)]
    if closed:
        out.append((stop, start))
    return out


FACE_POINTS = tuple(str(i) for i in range(70))
FACE_LIMBS = tuple(
    _chain(0, 16) + _chain(17, 21) + _chain(22, 26) + _chain(27, 30) + _chain(31, 35)
    + _chain(36, 41, closed=True) + _chain(42, 47, closed=True)
    + _chain(48, 59, closed=True) + _chain(60, 67, closed=True)
)
FACE_COLORS = ((255, 255, 255),)

_FINGERS = ("THUMB", "INDEX_FINGER", "MIDDLE_FINGER", "RING_FINGER", "PINKY")
_THUMB_JOINTS = ("CMC", "MCP", "IP", "TIP")
_FINGER_JOINTS = ("MCP", "PIP", "DIP", "TIP")
HAND_POINTS = ("WRIST",) + tuple(
    f"{finger}_{joint}"
    for finger in _FINGERS
    for joint in (_THUMB_JOINTS if finger == "THUMB" else _FINGER_JOINTS)
)
HAND_LIMBS = tuple(
    pair for f in range(5) for pair in [(0, 1 + 4 * f)] + _chain(1 + 4 * f, 4 + 4 * f)
)
HAND_COLORS = ((100, 100, 100),) + tuple(
    tuple(int(v * shade / 255) for v in base)
    for base in ((255, 0, 0), (255, 255, 0), (0, 255, 125), (0, 125, 255), (255, 0, 255))
    for shade in (100, 150, 200, 255)
)

# component name -> JSON key
COMPONENT_KEYS = {
    "BODY_25": "pose_keypoints_2d",
    "FACE": "face_keypoints_2d",
    "HAND_LEFT": "hand_left_keypoints_2d",
    "HAND_RIGHT": "hand_right_keypoints_2d",
}


def _body_23() -> PoseComponent:
    keep = [i for i, n in enumerate(BODY_25_POINTS) if n not in _SYNTHETIC_BODY_POINTS]
    remap = {old: new for new, old in enumerate(keep)}
    points = tuple(BODY_25_POINTS[i] for i in keep)
    limbs = [(remap[a], remap[b]) for a, b in BODY_25_LIMBS if a in remap and b in remap]
    limbs += [(points.index(a), points.index(b)) for a, b in _TORSO_LIMBS_23]
    colors = tuple(BODY_25_COLORS[i] for i in keep)
    return PoseComponent("BODY_23", "XYC", points, limbs, colors)


def openpose_components(variant: int = 137) -> tuple[PoseComponent, ...]:
    if variant == 137:
        body = PoseComponent("BODY_25", "XYC", BODY_25_POINTS, BODY_25_LIMBS, BODY_25_COLORS)
    elif variant == 135:
        body = _body_23()
    else:
        raise ValueError(f"OpenPose variant must be 135 or 137, got {variant}")
    return (
        body,
        PoseComponent("FACE", "XYC", FACE_POINTS, FACE_LIMBS, FACE_COLORS),
        PoseComponent("HAND_LEFT", "XYC", HAND_POINTS, HAND_LIMBS, HAND_COLORS),
        PoseComponent("HAND_RIGHT", "XYC", HAND_POINTS, HAND_LIMBS, HAND_COLORS),
    )


def openpose_header(variant: int = 137, width: int = 0, height: int = 0) -> PoseHeader:
    return PoseHeader(width, height, 0, openpose_components(variant))


@dataclass
class OpenPoseFrame:
    """One frame of OpenPose output: per person, flat (x, y, c) arrays keyed by JSON name."""

    people: list[dict[str, np.ndarray]] = field(default_factory=list)

    @classmethod
    def from_json(cls, obj: Mapping) -> OpenPoseFrame:
        if not isinstance(obj, Mapping) or not isinstance(obj.get("people", []), list):
            raise OpenPoseFormatError("frame must be an object with a 'people' list")
        people = []
        for person in obj.get("people", []):
            arrays = {}
            for key in COMPONENT_KEYS.values():
                values = person.get(key)
                if values is None:
                    continue
                try:
                    arr = np.asarray(values, dtype=np.float64)
                except (TypeError, ValueError) as e:
                    raise OpenPoseFormatError(f"{key}: non-numeric keypoints") from e
                if arr.ndim != 1 or arr.size % 3:
                    raise OpenPoseFormatError(
                        f"{key}: length {arr.size} is not a multiple of 3")
                arrays[key] = arr
            people.append(arrays)
        return cls(people)


def load_openpose_json(path) -> list[OpenPoseFrame]:
    """Read a per-frame JSON file or a monolithic one.

    A monolithic document is a top-level array of frames or an object with a
    ``frames`` array.
    """
    try:
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise OpenPoseFormatError(f"{path}: malformed JSON ({e})") from e
    if isinstance(doc, list):
        return [OpenPoseFrame.from_json(fr) for fr in doc]
    if isinstance(doc, dict) and isinstance(doc.get("frames"), list):
        return [OpenPoseFrame.from_json(fr) for fr in doc["frames"]]
    return [OpenPoseFrame.from_json(doc)]


def parse_openpose(frames: Iterable[OpenPoseFrame | Mapping], fps: int, width: int,
                   height: int, max_people: int = 1) -> Pose:
    """Assemble OpenPose frames into a 137-point pose with ``max_people`` person slots.

    Missing or empty keypoint arrays count as undetected. Frames with fewer
    people are padded with masked slots, extra people are dropped in
    detection order.
    """
    if fps < 1:
        raise ValueError(f"fps must be >= 1, got {fps}")
    if max_people < 1:
        raise ValueError(f"max_people must be >= 1, got {max_people}")
    header = openpose_header(137, width, height)
    frames = [fr if isinstance(fr, OpenPoseFrame) else OpenPoseFrame.from_json(fr)
              for fr in frames]
    n_points = header.total_points
    raw = np.zeros((len(frames), max_people, n_points, 3), dtype=np.float32)
    for f, frame in enumerate(frames):
        for p, person in enumerate(frame.people[:max_people]):
            for comp in header.components:
                arr = person.get(COMPONENT_KEYS[comp.name])
                if arr is None or arr.size == 0:
                    continue
                if arr.size != 3 * len(comp.points):
                    raise OpenPoseFormatError(
                        f"frame {f} person {p}: {COMPONENT_KEYS[comp.name]} has "
                        f"{arr.size // 3} triples, expected {len(comp.points)}")
                sl = header.component_slice(comp.name)
                raw[f, p, sl] = arr.reshape(-1, 3)
    tensor = MaskedFrameTensor(raw[..., :2], raw[..., 2])
    return Pose(header, PoseBody(fps, tensor))


def parse_openpose_directory(path, fps: int, width: int, height: int,
                             max_people: int = 1) -> Pose:
    """Parse a directory of per-frame JSON files in lexicographic filename order."""
    files = sorted(Path(path).glob("*.json"))
    if not files:
        raise OpenPoseFormatError(f"{path}: no .json frames found")
    frames = []
    for file in files:
        try:
            frames.extend(load_openpose_json(file))
        except OSError as e:
            raise OpenPoseFormatError(f"{file}: {e}") from e
    return parse_openpose(frames, fps, width, height, max_people)


def frames_to_json(pose: Pose, digits: int = 6) -> list[dict]:
    """OpenPose-style frame objects for a pose built on the 137-point layout."""
    header = pose.header
    t = pose.body.tensor
    out = []
    for f in range(t.frames):
        people = []
        for p in range(t.people):
            if not t.mask[f, p].any():
                continue
            person = {"person_id": [-1]}
            for comp in header.components:
                sl = header.component_slice(comp.name)
                triples = np.concatenate(
                    [t.data[f, p, sl], t.confidence[f, p, sl, None]], axis=1)
                person[COMPONENT_KEYS[comp.name]] = [
                    float(f"{v:.{digits}g}") for v in triples.reshape(-1).tolist()]
            for key in ("pose_keypoints_3d", "face_keypoints_3d",
                        "hand_left_keypoints_3d", "hand_right_keypoints_3d"):
                person[key] = []
            people.append(person)
        out.append({"version": 1.3, "people": people})
    return out
