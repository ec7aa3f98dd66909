"""Binary mask generation for the mask-mode mixers and occlusion tooling.

Masks live on the spatial grid only (H x W for images, L for audio) and
mark with 1.0 the elements retained from the first sample of a pair.  The
stored mixing fraction ``lam`` is always recomputed from the realized mask,
never assumed from the requested target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fourier import _checked_spatial_shape, sample_low_freq_field
from .rng import RngState
from .tensor import check_mask_values


@dataclass(frozen=True)
class MixMask:
    """Binary retain-mask plus its exact retained fraction and geometry.

    ``geometry`` is a tagged dict: ``{"kind": "rect", x0, y0, w, h}``,
    ``{"kind": "interval", start, len}``, ``{"kind": "paste", ...}`` or
    ``{"kind": "freeform"}``.  Sizes describe the 0-region (the cut).
    """

    mask: np.ndarray
    lam: float
    geometry: dict

    def __post_init__(self):
        object.__setattr__(self, "mask", check_mask_values(self.mask))
        ones = int(np.count_nonzero(self.mask))
        lam = ones / self.mask.size
        object.__setattr__(self, "lam", lam)


def _require_open_unit(value: float, name: str) -> float:
    value = float(value)
    if not math.isfinite(value) or not 0.0 < value < 1.0:
        raise ValueError(f"{name} must lie strictly inside (0, 1), got {value!r}")
    return value


def _centered_run(center: int, length: int, limit: int) -> tuple[int, int]:
    """Clip the run [center - length//2, +length) to [0, limit)."""
    lo = center - length // 2
    hi = lo + length
    return max(lo, 0), min(hi, limit)


def rect_mask(rng: RngState, shape, lam_target: float) -> MixMask:
    """Cut-rectangle mask: zeros inside a rectangle of area fraction 1 - lam.

    The rectangle side scales with sqrt(1 - lam_target) per axis (length
    fraction 1 - lam_target in 1-D), its center is uniform over the grid,
    and it is clipped to bounds; a zero-size rectangle degenerates to the
    all-ones mask.
    """
    shape = _checked_spatial_shape(shape)
    lam_target = _require_open_unit(lam_target, "lam_target")
    mask = np.ones(shape, dtype=np.float32)
    if len(shape) == 1:
        (length,) = shape
        cut = round(length * (1.0 - lam_target))
        center = rng.randbelow(length)
        s0, s1 = _centered_run(center, cut, length)
        if s1 > s0:
            mask[s0:s1] = 0.0
        geometry = {"kind": "interval", "start": s0, "len": max(s1 - s0, 0)}
    else:
        h, w = shape
        side = math.sqrt(1.0 - lam_target)
        cw = round(w * side)
        ch = round(h * side)
        cx = rng.randbelow(w)
        cy = rng.randbelow(h)
        x0, x1 = _centered_run(cx, cw, w)
        y0, y1 = _centered_run(cy, ch, h)
        if x1 > x0 and y1 > y0:
            mask[y0:y1, x0:x1] = 0.0
            geometry = {"kind": "rect", "x0": x0, "y0": y0, "w": x1 - x0, "h": y1 - y0}
        else:
            geometry = {"kind": "rect", "x0": 0, "y0": 0, "w": 0, "h": 0}
    return MixMask(mask, 0.0, geometry)


def fourier_mask(rng: RngState, shape, lam_target: float, decay: float = 3.0) -> MixMask:
    """Threshold a low-frequency random field into a contiguous-blob mask.

    Exactly ``ceil(lam_target * N)`` elements (the largest field values,
    ties broken by flat index order) are set to 1, so the realized lam is
    ``ceil(lam_target * N) / N`` by construction.
    """
    shape = _checked_spatial_shape(shape, min_dim=2)
    lam_target = _require_open_unit(lam_target, "lam_target")
    field = sample_low_freq_field(rng, shape, decay)
    n = field.size
    k = math.ceil(lam_target * n)
    order = np.argsort(-field.reshape(-1), kind="stable")
    flat = np.zeros(n, dtype=np.float32)
    flat[order[:k]] = 1.0
    return MixMask(flat.reshape(shape), 0.0, {"kind": "freeform"})


def paste_region(rng: RngState, shape, lam_target: float) -> MixMask:
    """Paste-patch mask: zeros inside a patch placed fully inside bounds.

    The patch holds a complete resized source image, so unlike the cut
    rectangle it is never clipped; its scale is sqrt(1 - lam_target) per
    axis (length fraction 1 - lam_target in 1-D), clamped to at least one
    element.
    """
    shape = _checked_spatial_shape(shape)
    lam_target = _require_open_unit(lam_target, "lam_target")
    mask = np.ones(shape, dtype=np.float32)
    if len(shape) == 1:
        (length,) = shape
        scale = 1.0 - lam_target
        plen = min(max(round(length * scale), 1), length)
        start = rng.randbelow(length - plen + 1)
        mask[start : start + plen] = 0.0
        geometry = {"kind": "paste", "start": start, "len": plen, "scale": scale}
    else:
        h, w = shape
        scale = math.sqrt(1.0 - lam_target)
        pw = min(max(round(w * scale), 1), w)
        ph = min(max(round(h * scale), 1), h)
        x0 = rng.randbelow(w - pw + 1)
        y0 = rng.randbelow(h - ph + 1)
        mask[y0 : y0 + ph, x0 : x0 + pw] = 0.0
        geometry = {"kind": "paste", "x0": x0, "y0": y0, "w": pw, "h": ph, "scale": scale}
    return MixMask(mask, 0.0, geometry)


def _block_box(k: int, h: int, w: int) -> tuple[int, int, int, int]:
    """Near-square bounding box holding exactly k cells within an h x w grid.

    Returns (bw, bh, full_rows, rem): ``full_rows`` rows of width ``bw``
    plus a partial row of ``rem`` cells.
    """
    bw = max(1, round(math.sqrt(k)))
    bw = max(bw, -(-k // h))  # wide enough to fit within h rows
    bw = min(bw, w)
    full_rows = k // bw
    rem = k - full_rows * bw
    bh = full_rows + (1 if rem else 0)
    return bw, bh, full_rows, rem


def occlusion_mask(rng: RngState, shape, occluded_fraction: float, blocks: int = 1) -> MixMask:
    """Zero-block mask for occlusion robustness inputs.

    With a single block (the default) exactly ``round(fraction * N)``
    elements are zeroed, arranged as a near-square block placed uniformly
    and fully inside bounds, so the realized occluded fraction matches the
    request to within half an element.  With several blocks the total is
    split near-evenly and blocks may overlap; the realized fraction is
    recomputed from the mask either way.
    """
    shape = _checked_spatial_shape(shape)
    occluded_fraction = _require_open_unit(occluded_fraction, "occluded_fraction")
    blocks = int(blocks)
    if blocks < 1:
        raise ValueError("blocks must be at least 1")
    n = int(np.prod(shape))
    k_total = round(occluded_fraction * n)
    mask = np.ones(shape, dtype=np.float32)
    geometry: dict = {"kind": "freeform"}
    base = k_total // blocks
    parts = [base + (1 if i < k_total - base * blocks else 0) for i in range(blocks)]
    for k in parts:
        if k == 0:
            continue
        if len(shape) == 1:
            (length,) = shape
            start = rng.randbelow(length - k + 1)
            mask[start : start + k] = 0.0
            if blocks == 1:
                geometry = {"kind": "interval", "start": start, "len": k}
        else:
            h, w = shape
            bw, bh, full_rows, rem = _block_box(k, h, w)
            x0 = rng.randbelow(w - bw + 1)
            y0 = rng.randbelow(h - bh + 1)
            if full_rows:
                mask[y0 : y0 + full_rows, x0 : x0 + bw] = 0.0
            if rem:
                mask[y0 + full_rows, x0 : x0 + rem] = 0.0
            if blocks == 1:
                if rem == 0:
                    geometry = {"kind": "rect", "x0": x0, "y0": y0, "w": bw, "h": bh}
                else:
                    geometry = {"kind": "freeform"}
    if k_total == 0 and len(shape) != 1:
        geometry = {"kind": "rect", "x0": 0, "y0": 0, "w": 0, "h": 0}
    elif k_total == 0:
        geometry = {"kind": "interval", "start": 0, "len": 0}
    return MixMask(mask, 0.0, geometry)
