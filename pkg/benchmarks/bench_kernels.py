"""Time the numba and pure-numpy kernel paths against each other.

    python3 benchmarks/bench_kernels.py [--reps N]

Each kernel is warmed up once (so JIT compilation is excluded), then the
median of N runs is reported for both paths along with the speedup.
"""
import argparse
import statistics
import time

import numpy as np

from poseformat import kernels
from poseformat._accel import HAVE_NUMBA


def median_time(fn, reps):
    fn()
    samples = []
    for _ in range(reps):
        start = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - start)
    return statistics.median(samples)


def resample_case(rng):
    frames, series = 300, 137 * 2
    values = rng.normal(0, 100, (frames, series, 3))
    valid = rng.random((frames, series)) < 0.8
    times = np.linspace(0, frames - 1, 2 * frames)
    return lambda impl: impl(values, valid, times)


def raster_case(rng):
    h, w, n = 480, 640, 137
    pts = np.column_stack([rng.integers(0, w, n), rng.integers(0, h, n)]).astype(np.int64)
    colors = rng.integers(0, 256, (n, 3)).astype(np.float64)
    alpha = rng.uniform(0.2, 1, n)
    limbs = np.column_stack([np.arange(n - 1), np.arange(1, n)]).astype(np.int64)
    limb_alpha = np.minimum(alpha[limbs[:, 0]], alpha[limbs[:, 1]])
    limb_color = np.ascontiguousarray(colors[limbs[:, 0]])
    base = np.full((h, w, 3), 255.0)
    return lambda impl: impl(base.copy(), pts, colors, alpha, limbs, limb_color, limb_alpha, 4)


def lzw_case(rng):
    # mostly-background frame, like a rendered skeleton
    idx = np.zeros(480 * 640, dtype=np.uint8)
    hits = rng.random(idx.size) < 0.05
    idx[hits] = rng.integers(1, 64, hits.sum())
    return lambda impl: impl(idx, 8)


CASES = [
    ("resample 300x274x3 -> 600", resample_case,
     kernels.resample_series_numpy, kernels.resample_series_numba),
    ("rasterize 137 pts, 640x480", raster_case, kernels.rasterize_numpy, kernels.rasterize_numba),
    ("lzw 640x480 frame", lzw_case, kernels.lzw_encode_numpy, kernels.lzw_encode_numba),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--reps", type=int, default=5)
    args = parser.parse_args()
    if not HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<30} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for name, make, slow, fast in CASES:
        run = make(rng)
        t_np = median_time(lambda: run(slow), args.reps)
        t_nb = median_time(lambda: run(fast), args.reps)
        print(f"{name:<30} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
