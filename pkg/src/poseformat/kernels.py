"""Hot loops, each with a numba and a pure-numpy implementation.

The public names (``resample_series``, ``rasterize``, ``lzw_encode``) are
bound to the numba versions unless ``POSEFORMAT_DISABLE_NUMBA`` is set. Both
versions use the same arithmetic so their outputs agree to rounding; the two
LZW encoders are byte-identical.
"""
import numpy as np

from ._accel import USE_NUMBA, njit


# ---------------------------------------------------------------- resampling

def resample_series_numpy(values, valid, times):
    """Linear interpolation of each series over its valid frames.

    values: (F, S, C) float64, valid: (F, S) bool, times: (J,) float64 in
    source-frame units. Outside a series' valid support the nearest valid
    value is held. Returns (J, S, C) values and an (S,) flag telling which
    series had any valid frame; series without one come back as zeros.
    """
    n_frames, n_series, n_chan = values.shape
    out = np.zeros((times.shape[0], n_series, n_chan))
    has = np.zeros(n_series, dtype=np.bool_)
    frame_idx = np.arange(n_frames, dtype=np.float64)
    for s in range(n_series):
        sel = valid[:, s]
        if not sel.any():
            continue
        has[s] = True
        xp = frame_idx[sel]
        for c in range(n_chan):
            out[:, s, c] = np.interp(times, xp, values[sel, s, c])
    return out, has


@njit(cache=True)
def resample_series_numba(values, valid, times):
    n_frames, n_series, n_chan = values.shape
    n_out = times.shape[0]
    out = np.zeros((n_out, n_series, n_chan))
    has = np.zeros(n_series, dtype=np.bool_)
    xp = np.empty(n_frames)
    rows = np.empty(n_frames, dtype=np.int64)
    for s in range(n_series):
        n = 0
        for f in range(n_frames):
            if valid[f, s]:
                xp[n] = f
                rows[n] = f
                n += 1
        if n == 0:
            continue
        has[s] = True
        j = 0
        for i in range(n_out):
            t = times[i]
            if t >= xp[n - 1]:
                for c in range(n_chan):
                    out[i, s, c] = values[rows[n - 1], s, c]
                continue
            if t < xp[0]:
                for c in range(n_chan):
                    out[i, s, c] = values[rows[0], s, c]
                continue
            if t < xp[j]:
                j = 0
            while xp[j + 1] <= t:
                j += 1
            for c in range(n_chan):
                y0 = values[rows[j], s, c]
                if xp[j] == t:
                    out[i, s, c] = y0
                else:
                    y1 = values[rows[j + 1], s, c]
                    slope = (y1 - y0) / (xp[j + 1] - xp[j])
                    out[i, s, c] = slope * (t - xp[j]) + y0
    return out, has


# ---------------------------------------------------------------- raster

def rasterize_numpy(canvas, pts, pt_color, pt_alpha, limbs, limb_color, limb_alpha, radius):
    """Alpha-blend limbs, then discs, onto ``canvas`` in place.

    canvas: (H, W, 3) float64. pts: (N, 2) int64 pixel (x, y). Primitives with
    alpha <= 0 are skipped. Lines use a DDA over the major axis so every
    covered pixel is visited once.
    """
    h, w, _ = canvas.shape
    for li in range(limbs.shape[0]):
        a = limb_alpha[li]
        if a <= 0:
            continue
        x0, y0 = pts[limbs[li, 0]]
        x1, y1 = pts[limbs[li, 1]]
        dx, dy = x1 - x0, y1 - y0
        n = max(abs(dx), abs(dy))
        if n == 0:
            xs = np.array([x0])
            ys = np.array([y0])
        else:
            i = np.arange(n + 1, dtype=np.float64)
            xs = np.floor(x0 + dx * i / n + 0.5).astype(np.int64)
            ys = np.floor(y0 + dy * i / n + 0.5).astype(np.int64)
        keep = (xs >= 0) & (xs < w) & (ys >= 0) & (ys < h)
        xs, ys = xs[keep], ys[keep]
        canvas[ys, xs] = canvas[ys, xs] * (1.0 - a) + limb_color[li] * a

    r2 = radius * radius
    for k in range(pts.shape[0]):
        a = pt_alpha[k]
        if a <= 0:
            continue
        cx, cy = pts[k]
        x_lo, x_hi = max(cx - radius, 0), min(cx + radius, w - 1)
        y_lo, y_hi = max(cy - radius, 0), min(cy + radius, h - 1)
        if x_lo > x_hi or y_lo > y_hi:
            continue
        yy, xx = np.mgrid[y_lo:y_hi + 1, x_lo:x_hi + 1]
        disc = (xx - cx) ** 2 + (yy - cy) ** 2 <= r2
        ys, xs = yy[disc], xx[disc]
        canvas[ys, xs] = canvas[ys, xs] * (1.0 - a) + pt_color[k] * a


@njit(cache=True)
def rasterize_numba(canvas, pts, pt_color, pt_alpha, limbs, limb_color, limb_alpha, radius):
    h, w, _ = canvas.shape
    for li in range(limbs.shape[0]):
        a = limb_alpha[li]
        if a <= 0:
            continue
        x0 = pts[limbs[li, 0], 0]
        y0 = pts[limbs[li, 0], 1]
        dx = pts[limbs[li, 1], 0] - x0
        dy = pts[limbs[li, 1], 1] - y0
        n = max(abs(dx), abs(dy))
        for i in range(n + 1):
            if n == 0:
                x, y = x0, y0
            else:
                x = np.int64(np.floor(x0 + dx * np.float64(i) / n + 0.5))
                y = np.int64(np.floor(y0 + dy * np.float64(i) / n + 0.5))
            if 0 <= x < w and 0 <= y < h:
                for c in range(3):
                    canvas[y, x, c] = canvas[y, x, c] * (1.0 - a) + limb_color[li, c] * a

    r2 = radius * radius
    for k in range(pts.shape[0]):
        a = pt_alpha[k]
        if a <= 0:
            continue
        cx = pts[k, 0]
        cy = pts[k, 1]
        for y in range(max(cy - radius, 0), min(cy + radius, h - 1) + 1):
            for x in range(max(cx - radius, 0), min(cx + radius, w - 1) + 1):
                if (x - cx) ** 2 + (y - cy) ** 2 <= r2:
                    for c in range(3):
                        canvas[y, x, c] = canvas[y, x, c] * (1.0 - a) + pt_color[k, c] * a


# ---------------------------------------------------------------- GIF LZW

LZW_MAX_CODES = 4096


def lzw_encode_numpy(indices, min_code_size):
    """Variable-width GIF LZW over palette indices (uint8 array); returns packed bytes.

    No vectorized form exists for LZW, so the fallback is a plain dict loop.
    """
    indices = bytes(np.ascontiguousarray(indices, dtype=np.uint8))
    clear = 1 << min_code_size
    eoi = clear + 1
    out = bytearray()
    acc = 0
    nbits = 0

    def emit(code, width):
        nonlocal acc, nbits
        acc |= code << nbits
        nbits += width
        while nbits >= 8:
            out.append(acc & 0xFF)
            acc >>= 8
            nbits -= 8

    table = {}
    next_code = eoi + 1
    width = min_code_size + 1
    emit(clear, width)
    if indices:
        w = indices[0]
        for k in indices[1:]:
            key = (w << 8) | k
            code = table.get(key)
            if code is not None:
                w = code
                continue
            emit(w, width)
            if next_code < LZW_MAX_CODES:
                table[key] = next_code
                next_code += 1
                if next_code > (1 << width) and width < 12:
                    width += 1
            else:
                emit(clear, width)
                table.clear()
                next_code = eoi + 1
                width = min_code_size + 1
            w = k
        emit(w, width)
    emit(eoi, width)
    if nbits:
        out.append(acc & 0xFF)
    return bytes(out)


@njit(cache=True)
def _lzw_numba(indices, min_code_size):
    clear = 1 << min_code_size
    eoi = clear + 1
    n = indices.shape[0]
    out = np.zeros(2 * n + 16, dtype=np.uint8)
    pos = 0
    acc = np.uint64(0)
    nbits = 0
    child = np.full((LZW_MAX_CODES, 256), -1, dtype=np.int16)
    next_code = eoi + 1
    width = min_code_size + 1

    acc |= np.uint64(clear) << np.uint64(nbits)
    nbits += width
    while nbits >= 8:
        out[pos] = np.uint8(acc & np.uint64(0xFF))
        pos += 1
        acc >>= np.uint64(8)
        nbits -= 8

    if n > 0:
        w = np.int64(indices[0])
        for i in range(1, n):
            k = indices[i]
            code = child[w, k]
            if code >= 0:
                w = np.int64(code)
                continue
            acc |= np.uint64(w) << np.uint64(nbits)
            nbits += width
            while nbits >= 8:
                out[pos] = np.uint8(acc & np.uint64(0xFF))
                pos += 1
                acc >>= np.uint64(8)
                nbits -= 8
            if next_code < LZW_MAX_CODES:
                child[w, k] = next_code
                next_code += 1
                if next_code > (1 << width) and width < 12:
                    width += 1
            else:
                acc |= np.uint64(clear) << np.uint64(nbits)
                nbits += width
                while nbits >= 8:
                    out[pos] = np.uint8(acc & np.uint64(0xFF))
                    pos += 1
                    acc >>= np.uint64(8)
                    nbits -= 8
                child[:next_code, :] = -1
                next_code = eoi + 1
                width = min_code_size + 1
            w = np.int64(k)
        acc |= np.uint64(w) << np.uint64(nbits)
        nbits += width
        while nbits >= 8:
            out[pos] = np.uint8(acc & np.uint64(0xFF))
            pos += 1
            acc >>= np.uint64(8)
            nbits -= 8

    acc |= np.uint64(eoi) << np.uint64(nbits)
    nbits += width
    while nbits > 0:
        out[pos] = np.uint8(acc & np.uint64(0xFF))
        pos += 1
        acc >>= np.uint64(8)
        nbits -= 8
    return out[:pos]


def lzw_encode_numba(indices, min_code_size):
    return _lzw_numba(np.ascontiguousarray(indices, dtype=np.uint8).reshape(-1),
                      min_code_size).tobytes()


if USE_NUMBA:
    resample_series = resample_series_numba
    rasterize = rasterize_numba
    lzw_encode = lzw_encode_numba
else:
    resample_series = resample_series_numpy
    rasterize = rasterize_numpy
    lzw_encode = lzw_encode_numpy
