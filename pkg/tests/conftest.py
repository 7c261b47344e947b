import sys
from pathlib import Path

import numpy as np
import pytest

from poseformat.structures import MaskedFrameTensor, Pose, PoseBody, PoseComponent, PoseHeader

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
sys.path.insert(0, str(ROOT / "scripts"))


def random_header(rng, points, dims, n_components=None, width=640, height=480):
    """Header whose ``points`` are split across a few components."""
    fmt = "XYC" if dims == 2 else "XYZC"
    n_components = n_components or int(rng.integers(1, min(points, 4) + 1))
    cuts = np.sort(rng.choice(np.arange(1, points), n_components - 1, replace=False)) \
        if n_components > 1 else []
    sizes = np.diff(np.concatenate([[0], cuts, [points]])).astype(int)
    comps = []
    for i, n in enumerate(sizes):
        names = [f"p{j}" for j in range(n)]
        limbs = [(int(a), int(b)) for a, b in rng.integers(0, n, (int(rng.integers(0, n + 1)), 2))]
        colors = [tuple(int(c) for c in rng.integers(0, 256, 3)) for _ in range(int(rng.integers(0, 4)))]
        comps.append(PoseComponent(f"C{i}", fmt, names, limbs, colors))
    return PoseHeader(width, height, 0 if dims == 2 else 100, comps)


def random_tensor(rng, frames, people, points, dims, mask_p=0.2, scale=100.0):
    data = rng.normal(0, scale, (frames, people, points, dims))
    conf = rng.uniform(0.01, 1.0, (frames, people, points))
    conf[rng.random(conf.shape) < mask_p] = 0
    return MaskedFrameTensor(data, conf)


def random_pose(rng, frames=None, people=None, points=None, dims=None, mask_p=0.2, fps=None):
    frames = int(rng.integers(0, 51)) if frames is None else frames
    people = int(rng.integers(1, 4)) if people is None else people
    points = int(rng.integers(1, 201)) if points is None else points
    dims = int(rng.integers(2, 4)) if dims is None else dims
    fps = int(rng.integers(1, 61)) if fps is None else fps
    header = random_header(rng, points, dims)
    return Pose(header, PoseBody(fps, random_tensor(rng, frames, people, points, dims, mask_p)))


def shoulder_pose(rng, frames=6, people=2, dims=2):
    """Pose with a 'body' component whose first two points are the shoulders; all frames valid for them."""
    points = 8
    fmt = "XYC" if dims == 2 else "XYZC"
    header = PoseHeader(500, 500, 0, [
        PoseComponent("body", fmt, ["LS", "RS"] + [f"b{i}" for i in range(points - 2)],
                      [(0, 1), (0, 2)], [(255, 0, 0)]),
    ])
    data = rng.uniform(0, 500, (frames, people, points, dims))
    conf = rng.uniform(0.1, 1.0, (frames, people, points))
    conf[..., 2:][rng.random((frames, people, points - 2)) < 0.3] = 0
    return Pose(header, PoseBody(25, MaskedFrameTensor(data, conf)))


def assert_canonical(t: MaskedFrameTensor):
    masked = t.confidence == 0
    assert not np.any(t.data[masked] != 0)
    assert np.all((t.confidence >= 0) & (t.confidence <= 1))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# ---------------------------------------------------------------- acceptance summary

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    number, title = marker
    if report.when == "call" or report.outcome != "passed":
        previous = _CRITERIA.get(number, (title, "PASS"))[1]
        status = "PASS" if report.outcome == "passed" and previous == "PASS" else "FAIL"
        _CRITERIA[number] = (title, status)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status = _CRITERIA[number]
        terminalreporter.write_line(f"[{status}] {number:2d}. {title}")
