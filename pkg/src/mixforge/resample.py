"""Channel-wise spatial resampling with corner-aligned sample positions."""

from __future__ import annotations

import numpy as np


def _axis_positions(n_in: int, n_out: int) -> np.ndarray:
    """Source coordinates for each output index, corners mapped to corners."""
    if n_out == 1:
        return np.array([(n_in - 1) / 2.0])
    return np.arange(n_out) * ((n_in - 1) / (n_out - 1))


def _check_input(x, out_spatial):
    a = np.asarray(x, dtype=np.float32)
    if a.ndim not in (2, 3):
        raise ValueError("expected a rank-2 (CxL) or rank-3 (CxHxW) tensor")
    out = tuple(int(s) for s in out_spatial)
    if len(out) != a.ndim - 1:
        raise ValueError(f"output spatial rank {len(out)} does not match input rank {a.ndim}")
    if any(s < 1 for s in out):
        raise ValueError("output sizes must be positive")
    return a, out


def resize_bilinear(x, out_spatial) -> np.ndarray:
    """Bilinear (linear in 1-D) resize of a channels-first tensor."""
    a, out = _check_input(x, out_spatial)
    a64 = a.astype(np.float64)
    if a.ndim == 2:
        (length,) = a.shape[1:]
        pos = _axis_positions(length, out[0])
        i0 = np.floor(pos).astype(np.int64)
        i0 = np.clip(i0, 0, length - 1)
        i1 = np.minimum(i0 + 1, length - 1)
        w = pos - i0
        res = a64[:, i0] * (1.0 - w) + a64[:, i1] * w
        return res.astype(np.float32)
    h, w_in = a.shape[1:]
    ys = _axis_positions(h, out[0])
    xs = _axis_positions(w_in, out[1])
    y0 = np.clip(np.floor(ys).astype(np.int64), 0, h - 1)
    x0 = np.clip(np.floor(xs).astype(np.int64), 0, w_in - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w_in - 1)
    wy = (ys - y0)[None, :, None]
    wx = (xs - x0)[None, None, :]
    g00 = a64[:, y0[:, None], x0[None, :]]
    g01 = a64[:, y0[:, None], x1[None, :]]
    g10 = a64[:, y1[:, None], x0[None, :]]
    g11 = a64[:, y1[:, None], x1[None, :]]
    res = (
        g00 * (1.0 - wy) * (1.0 - wx)
        + g01 * (1.0 - wy) * wx
        + g10 * wy * (1.0 - wx)
        + g11 * wy * wx
    )
    return res.astype(np.float32)


def resize_nearest(x, out_spatial) -> np.ndarray:
    """Nearest-neighbour resize of a channels-first tensor."""
    a, out = _check_input(x, out_spatial)
    if a.ndim == 2:
        (length,) = a.shape[1:]
        idx = np.clip(np.rint(_axis_positions(length, out[0])).astype(np.int64), 0, length - 1)
        return np.ascontiguousarray(a[:, idx])
    h, w_in = a.shape[1:]
    yi = np.clip(np.rint(_axis_positions(h, out[0])).astype(np.int64), 0, h - 1)
    xi = np.clip(np.rint(_axis_positions(w_in, out[1])).astype(np.int64), 0, w_in - 1)
    return np.ascontiguousarray(a[:, yi[:, None], xi[None, :]])
