import math

import numpy as np
import pytest

from poseformat.errors import (
    DegeneratePlaneError,
    DegenerateSkeletonError,
    NoReferenceDataError,
    UnknownPointError,
    UnsupportedOperationError,
)
from poseformat.ops import (
    Affine,
    AugmentationSpec,
    FrameDropout,
    Interpolate,
    Noise,
    NormalizationInfo,
    Reflect,
    Rotate,
    Scale,
    Shear,
    Translate,
    augment,
    frame_dropout,
    interpolate_fps,
    normalize,
    rotate_to_plane,
    rotation_between,
)
from poseformat.structures import MaskedFrameTensor, Pose, PoseBody, PoseComponent, PoseHeader

from conftest import assert_canonical, random_pose, shoulder_pose

SHOULDERS = NormalizationInfo(("body", "LS"), ("body", "RS"))


def line_pose(values, conf=None, fps=10, dims=2):
    """One person, one point per frame at (v, 0[, 0])."""
    values = np.asarray(values, dtype=np.float64)
    data = np.zeros((len(values), 1, 1, dims))
    data[:, 0, 0, 0] = values
    conf = np.ones(len(values)) if conf is None else np.asarray(conf, dtype=np.float64)
    fmt = "XYC" if dims == 2 else "XYZC"
    header = PoseHeader(10, 10, 0, [PoseComponent("c", fmt, ["p"])])
    return Pose(header, PoseBody(fps, MaskedFrameTensor(data, conf.reshape(-1, 1, 1))))


def reference_stats(pose, info=SHOULDERS):
    """Brute-force mean distance and mean midpoint of the reference pair."""
    h = pose.header
    a, b = h.point_index(*info.left), h.point_index(*info.right)
    t = pose.body.tensor
    dists, mids = [], []
    for f in range(t.frames):
        for p in range(t.people):
            if t.confidence[f, p, a] > 0 and t.confidence[f, p, b] > 0:
                xa, xb = t.data[f, p, a].astype(float), t.data[f, p, b].astype(float)
                dists.append(math.dist(xa, xb))
                mids.append((xa + xb) / 2)
    return np.mean(dists), np.mean(mids, axis=0)


class TestNormalize:
    def two_frame_pose(self):
        header = PoseHeader(10, 10, 0, [PoseComponent("body", "XYC", ["LS", "RS"])])
        data = [[[[0, 1], [2, 1]]], [[[1, 3], [5, 3]]]]  # distances 2 and 4, midpoints (1,1), (3,3)
        return Pose(header, PoseBody(1, MaskedFrameTensor(data, np.ones((2, 1, 2)))))

    def test_hand_example(self):
        out = normalize(self.two_frame_pose(), SHOULDERS)
        # scale 1/3, shift by (2, 2)
        expected = (np.array([[[[0, 1], [2, 1]]], [[[1, 3], [5, 3]]]]) - 2) / 3
        np.testing.assert_allclose(out.body.tensor.data, expected, atol=1e-6)
        d = np.linalg.norm(out.body.tensor.data[:, 0, 0] - out.body.tensor.data[:, 0, 1], axis=-1)
        np.testing.assert_allclose(d, [2 / 3, 4 / 3], atol=1e-6)
        dist, mid = reference_stats(out)
        assert dist == pytest.approx(1, abs=1e-6)
        np.testing.assert_allclose(mid, 0, atol=1e-6)

    def test_fixed_point(self):
        once = normalize(self.two_frame_pose(), SHOULDERS)
        twice = normalize(once, SHOULDERS)
        np.testing.assert_allclose(twice.body.tensor.data, once.body.tensor.data, atol=1e-6)

    def test_post_conditions_random(self, rng):
        for dims in (2, 3):
            out = normalize(shoulder_pose(rng, dims=dims), SHOULDERS)
            dist, mid = reference_stats(out)
            assert dist == pytest.approx(1, abs=1e-5)
            np.testing.assert_allclose(mid, 0, atol=1e-5)
            assert_canonical(out.body.tensor)

    def test_header_untouched(self, rng):
        pose = shoulder_pose(rng)
        assert normalize(pose, SHOULDERS).header == pose.header

    def test_no_reference_data(self, rng):
        pose = shoulder_pose(rng)
        conf = pose.body.tensor.confidence.copy()
        conf[..., 0] = 0
        pose = pose.with_tensor(MaskedFrameTensor(pose.body.tensor.data, conf))
        with pytest.raises(NoReferenceDataError):
            normalize(pose, SHOULDERS)

    def test_degenerate(self):
        header = PoseHeader(10, 10, 0, [PoseComponent("body", "XYC", ["LS", "RS"])])
        pose = Pose(header, PoseBody(1, MaskedFrameTensor(np.ones((2, 1, 2, 2)), np.ones((2, 1, 2)))))
        with pytest.raises(DegenerateSkeletonError):
            normalize(pose, SHOULDERS)

    def test_unknown_point(self, rng):
        with pytest.raises(UnknownPointError, match="body:nope"):
            normalize(shoulder_pose(rng), NormalizationInfo(("body", "nope"), ("body", "RS")))

    def test_ignores_frames_with_one_shoulder(self):
        header = PoseHeader(10, 10, 0, [PoseComponent("body", "XYC", ["LS", "RS"])])
        data = [[[[0, 0], [2, 0]]], [[[100, 0], [300, 0]]]]
        conf = [[[1, 1]], [[1, 0]]]
        out = normalize(Pose(header, PoseBody(1, MaskedFrameTensor(data, conf))), SHOULDERS)
        np.testing.assert_allclose(out.body.tensor.data[0, 0], [[-0.5, 0], [0.5, 0]], atol=1e-6)
        np.testing.assert_allclose(out.body.tensor.data[1, 0, 0], [(100 - 1) / 2, 0], atol=1e-4)


class TestRotateToPlane:
    def tri_pose(self, a, b, c, frames=1):
        header = PoseHeader(10, 10, 10, [PoseComponent("c", "XYZC", ["A", "B", "C"])])
        data = np.tile(np.array([a, b, c], dtype=float), (frames, 1, 1, 1)).reshape(frames, 1, 3, 3)
        return Pose(header, PoseBody(1, MaskedFrameTensor(data, np.ones((frames, 1, 3)))))

    NAMES = (("c", "A"), ("c", "B"), ("c", "C"))

    def test_already_aligned(self):
        pose = self.tri_pose((0, 0, 0), (1, 0, 0), (0, 1, 0))
        out = rotate_to_plane(pose, *self.NAMES)
        np.testing.assert_allclose(out.body.tensor.data, pose.body.tensor.data, atol=1e-6)

    def test_hand_rodrigues(self):
        # normal (0,-1,0) -> (0,0,1): quarter turn about -x, R = [[1,0,0],[0,0,1],[0,-1,0]]
        out = rotate_to_plane(self.tri_pose((0, 0, 0), (1, 0, 0), (0, 0, 1)), *self.NAMES)
        np.testing.assert_allclose(out.body.tensor.data[0, 0], [[0, 0, 0], [1, 0, 0], [0, 1, 0]],
                                   atol=1e-6)
        a, b, c = out.body.tensor.data[0, 0].astype(float)
        n = np.cross(b - a, c - a)
        np.testing.assert_allclose(n / np.linalg.norm(n), [0, 0, 1], atol=1e-6)

    def test_antiparallel(self):
        np.testing.assert_allclose(rotation_between([0, 0, -1]), np.diag([1, -1, -1]))

    def test_random_isometry(self, rng):
        header = PoseHeader(10, 10, 10, [PoseComponent("c", "XYZC", [f"p{i}" for i in range(6)])])
        data = rng.normal(0, 10, (4, 1, 6, 3))
        conf = np.ones((4, 1, 6))
        pose = Pose(header, PoseBody(1, MaskedFrameTensor(data, conf)))
        names = (("c", "p0"), ("c", "p1"), ("c", "p2"))
        out = rotate_to_plane(pose, *names)
        m = out.body.tensor.data.astype(float).mean(axis=(0, 1))
        n = np.cross(m[1] - m[0], m[2] - m[0])
        np.testing.assert_allclose(n / np.linalg.norm(n), [0, 0, 1], atol=1e-6)
        for f in range(4):
            a, b = data[f, 0], out.body.tensor.data[f, 0].astype(float)
            np.testing.assert_allclose(np.linalg.norm(b[:, None] - b[None], axis=-1),
                                       np.linalg.norm(a[:, None] - a[None], axis=-1), atol=1e-4)

    def test_collinear(self):
        with pytest.raises(DegeneratePlaneError):
            rotate_to_plane(self.tri_pose((0, 0, 0), (0, 0, 0), (0, 0, 1)), *self.NAMES)
        with pytest.raises(DegeneratePlaneError):
            rotate_to_plane(self.tri_pose((0, 0, 0), (1, 1, 1), (2, 2, 2)), *self.NAMES)

    def test_2d_rejected(self, rng):
        with pytest.raises(UnsupportedOperationError):
            rotate_to_plane(shoulder_pose(rng), ("body", "LS"), ("body", "RS"), ("body", "b0"))


class TestInterpolate:
    def test_same_fps_identity(self, rng):
        pose = random_pose(rng, frames=12, people=2, points=9, dims=3, mask_p=0.3)
        out = interpolate_fps(pose, pose.body.fps)
        np.testing.assert_allclose(out.body.tensor.data, pose.body.tensor.data, atol=1e-6)
        np.testing.assert_allclose(out.body.tensor.confidence, pose.body.tensor.confidence, atol=1e-6)

    def test_doubling(self):
        out = interpolate_fps(line_pose([0, 2], fps=10), 20)
        assert out.body.fps == 20
        assert out.body.tensor.data[:, 0, 0, 0].tolist() == [0, 1, 2]

    def test_gap(self):
        pose = line_pose([0, 0, 4], conf=[1, 0, 1], fps=10)
        out = interpolate_fps(pose, 20)
        x = out.body.tensor.data[:, 0, 0, 0]
        c = out.body.tensor.confidence[:, 0, 0]
        # t = .5 sits between valid frames 0 and 2 for coordinates, between 1 and 0 for confidence
        assert x[1] == pytest.approx(1.0)
        assert c[1] == pytest.approx(0.5)
        # t = 1 lands on the gap: its raw confidence is 0, so the slot stays masked
        assert c[2] == 0 and x[2] == 0
        assert x[3] == pytest.approx(3.0)

    def test_round_trip_double_then_back(self, rng):
        pose = random_pose(rng, frames=15, people=2, points=7, dims=2, mask_p=0.0, fps=12)
        back = interpolate_fps(interpolate_fps(pose, 24), 12)
        np.testing.assert_allclose(back.body.tensor.data, pose.body.tensor.data, atol=1e-5)

    def test_downsample_frame_count(self):
        pose = line_pose(np.arange(10.0), fps=30)
        out = interpolate_fps(pose, 10)
        assert out.body.tensor.data[:, 0, 0, 0].tolist() == [0, 3, 6, 9]

    def test_never_valid_stays_masked(self):
        out = interpolate_fps(line_pose([1, 2, 3], conf=[0, 0, 0]), 25)
        assert not out.body.tensor.confidence.any() and not out.body.tensor.data.any()

    def test_errors(self):
        with pytest.raises(UnsupportedOperationError):
            interpolate_fps(line_pose([1, 2], fps=0), 10)
        with pytest.raises(ValueError):
            interpolate_fps(line_pose([1, 2]), 0)


class TestAugment:
    def test_empty_spec(self, rng):
        pose = random_pose(rng, frames=4)
        assert augment(pose, AugmentationSpec()) == pose

    def test_rotate_quarter(self):
        out = augment(line_pose([1]), [Rotate(math.pi / 2)])
        np.testing.assert_allclose(out.body.tensor.data[0, 0, 0], [0, 1], atol=1e-6)

    def test_rotate_3d_about_z(self):
        pose = line_pose([1], dims=3)
        out = augment(pose, [Rotate(math.pi / 2)])
        np.testing.assert_allclose(out.body.tensor.data[0, 0, 0], [0, 1, 0], atol=1e-6)

    @pytest.mark.parametrize("step,expected", [
        (Scale(2, 3), [2, 0]),
        (Translate((1, -1)), [2, -1]),
        (Shear(0.5, 2.0), [1, 2]),
        (Reflect(0), [-1, 0]),
        (Affine(((0, 1), (1, 0)), (0, 5)), [0, 6]),
    ])
    def test_affine_steps(self, step, expected):
        out = augment(line_pose([1]), [step])
        np.testing.assert_allclose(out.body.tensor.data[0, 0, 0], expected, atol=1e-6)

    def test_chain_order(self):
        out = augment(line_pose([1]), [Translate((1, 0)), Scale(3, 3)])
        np.testing.assert_allclose(out.body.tensor.data[0, 0, 0], [6, 0])

    def test_noise_deterministic(self, rng):
        pose = random_pose(rng, frames=5, mask_p=0.3)
        a = augment(pose, [Noise(0.1, 7)])
        b = augment(pose, [Noise(0.1, 7)])
        assert a == b
        assert a != pose
        assert np.array_equal(a.body.tensor.mask, pose.body.tensor.mask)
        assert_canonical(a.body.tensor)

    def test_noise_statistics(self):
        pose = line_pose(np.zeros(20000))
        out = augment(pose, [Noise(0.5, 3)])
        assert out.body.tensor.data[..., 0].std() == pytest.approx(0.5, rel=0.03)

    def test_dropout_bounds(self, rng):
        pose = random_pose(rng, frames=20)
        assert augment(pose, [FrameDropout(0.0, 1)]).body.frames == 20
        assert augment(pose, [FrameDropout(1.0, 1)]).body.frames == 1

    def test_dropout_returns_indices(self):
        pose = line_pose(np.arange(30.0))
        out, dropped = frame_dropout(pose, 0.5, seed=4)
        kept = out.body.tensor.data[:, 0, 0, 0]
        assert sorted(set(range(30)) - set(kept.astype(int))) == dropped.tolist()

    def test_dropout_binomial(self):
        frames, trials = 40, 10_000
        pose = line_pose(np.arange(float(frames)))
        counts = np.array([frame_dropout(pose, 0.5, seed)[0].body.frames for seed in range(trials)])
        sigma_of_mean = math.sqrt(frames * 0.25 / trials)
        assert abs(counts.mean() - frames * 0.5) <= 4 * sigma_of_mean

    def test_dropout_empty(self):
        with pytest.raises(UnsupportedOperationError):
            augment(line_pose([]), [FrameDropout(0.5, 1)])

    def test_interpolate_step(self):
        out = augment(line_pose([0, 2]), [Interpolate(20)])
        assert out.body.fps == 20 and out.body.frames == 3

    def test_spec_from_dict(self):
        spec = AugmentationSpec.from_dict({"steps": [
            {"op": "rotate", "degrees": 90}, {"op": "scale", "sx": 2, "sy": 2},
            {"op": "reflect", "axis": "y"}, {"op": "noise", "stddev": 0.0, "seed": 1},
            {"op": "affine", "matrix": [[1, 0], [0, 1]], "offset": [0, 0]},
        ]})
        out = augment(line_pose([1]), spec)
        np.testing.assert_allclose(out.body.tensor.data[0, 0, 0], [0, -2], atol=1e-6)

    @pytest.mark.parametrize("bad", [
        [{"op": "warp"}], [{"op": "noise", "stddev": -1, "seed": 0}],
        [{"op": "dropout", "probability": 2, "seed": 0}], [{"op": "rotate", "turns": 1}],
        [{"op": "interpolate", "fps": 0}],
    ])
    def test_spec_validation(self, bad):
        with pytest.raises(ValueError):
            AugmentationSpec.from_dict(bad)


def test_every_op_keeps_mask_canonical(rng):
    for _ in range(10):
        pose = shoulder_pose(rng, dims=3)
        outs = [
            normalize(pose, SHOULDERS),
            rotate_to_plane(pose, ("body", "LS"), ("body", "RS"), ("body", "b0")),
            interpolate_fps(pose, 40),
            augment(pose, [Rotate(0.3), Shear(0.1, 0.2), Noise(2.0, 1), FrameDropout(0.3, 2)]),
        ]
        for out in outs:
            assert_canonical(out.body.tensor)
