"""The four base mixers behind one contract.

Each mixer maps ``(a, b, rng, cfg) -> MixResult`` where the mixed label is
always ``lam * a.y + (1 - lam) * b.y`` for the lam stored in the result.
Mask-mode mixers (cutmix, resizemix, fmix) store the realized mask
fraction, so that identity is exact rather than approximate.

Passing ``lam=...`` overrides the random draw; this is the hook batch
pipelines use to pre-draw every lambda from a sequential master stream
before fanning pairs out to workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .masks import fourier_mask, paste_region, rect_mask
from .rng import RngState, sample_beta, sample_uniform
from .resample import resize_bilinear, resize_nearest
from .tensor import Sample

METHODS = ("mixup", "cutmix", "resizemix", "fmix")

# Mixed-mode taxonomy: per-element convex combination vs binary selection.
LINEAR_METHODS = frozenset({"mixup"})
MASK_METHODS = frozenset({"cutmix", "resizemix", "fmix"})

INTERPOLATIONS = ("bilinear", "nearest")


def mixed_mode(method: str) -> str:
    """Return "linear" or "mask" for a mixer identifier."""
    if method in LINEAR_METHODS:
        return "linear"
    if method in MASK_METHODS:
        return "mask"
    raise ValueError(f"unknown mixer {method!r}")


@dataclass(frozen=True)
class MixerConfig:
    """Shared mixer knobs.

    ``alpha`` parametrizes the Beta(alpha, alpha) lambda draws; cutmix
    draws lambda from U(0, 1) instead unless ``cutmix_beta`` is set.
    """

    alpha: float = 1.0
    fmix_decay: float = 3.0
    resizemix_interp: str = "bilinear"
    cutmix_beta: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError("alpha must be positive and finite")
        if not (math.isfinite(self.fmix_decay) and self.fmix_decay > 0):
            raise ValueError("fmix_decay must be positive and finite")
        if self.resizemix_interp not in INTERPOLATIONS:
            raise ValueError(f"resizemix_interp must be one of {INTERPOLATIONS}")


DEFAULT_CONFIG = MixerConfig()


@dataclass(frozen=True)
class MixResult:
    """A mixed tensor, its soft label, and full provenance."""

    x_mixed: np.ndarray
    y_mixed: np.ndarray
    lam: float
    method: str
    mask_geometry: Optional[dict] = None


def _check_pair(a: Sample, b: Sample):
    if a.x.shape != b.x.shape:
        raise ValueError(f"sample tensor shapes differ: {a.x.shape} vs {b.x.shape}")
    if a.y.shape != b.y.shape:
        raise ValueError(f"label lengths differ: {a.y.size} vs {b.y.size}")


def _convex(u: np.ndarray, v: np.ndarray, lam: float) -> np.ndarray:
    out = lam * u.astype(np.float64) + (1.0 - lam) * v.astype(np.float64)
    return out.astype(np.float32)


def _checked_lam(lam: float, closed: bool) -> float:
    lam = float(lam)
    ok = 0.0 <= lam <= 1.0 if closed else 0.0 < lam < 1.0
    if not (math.isfinite(lam) and ok):
        bounds = "[0, 1]" if closed else "(0, 1)"
        raise ValueError(f"forced lam must lie in {bounds}, got {lam!r}")
    return lam


def open_unit_uniform(rng: RngState) -> float:
    """U(0, 1) draw conditioned away from exactly 0."""
    u = sample_uniform(rng, 0.0, 1.0)
    while u == 0.0:
        u = sample_uniform(rng, 0.0, 1.0)
    return u


def _select_pixels(mask: np.ndarray, xa: np.ndarray, xb: np.ndarray) -> np.ndarray:
    # Broadcast the spatial mask over the channel axis; pure selection, so
    # every output element is bit-identical to one of the sources.
    return np.where(mask[np.newaxis] == 1.0, xa, xb)


def mixup(a: Sample, b: Sample, rng: RngState, cfg: MixerConfig = DEFAULT_CONFIG,
          *, lam: float | None = None) -> MixResult:
    """Per-element convex combination of two samples."""
    _check_pair(a, b)
    lam = sample_beta(rng, cfg.alpha) if lam is None else _checked_lam(lam, closed=True)
    return MixResult(
        x_mixed=_convex(a.x, b.x, lam),
        y_mixed=_convex(a.y, b.y, lam),
        lam=lam,
        method="mixup",
    )


def cutmix(a: Sample, b: Sample, rng: RngState, cfg: MixerConfig = DEFAULT_CONFIG,
           *, lam: float | None = None) -> MixResult:
    """Replace a random rectangle of ``a`` with the same region of ``b``."""
    _check_pair(a, b)
    if lam is None:
        lam = sample_beta(rng, cfg.alpha) if cfg.cutmix_beta else open_unit_uniform(rng)
    else:
        lam = _checked_lam(lam, closed=False)
    m = rect_mask(rng, a.spatial_shape, lam)
    return MixResult(
        x_mixed=_select_pixels(m.mask, a.x, b.x),
        y_mixed=_convex(a.y, b.y, m.lam),
        lam=m.lam,
        method="cutmix",
        mask_geometry=m.geometry,
    )


def resizemix(a: Sample, b: Sample, rng: RngState, cfg: MixerConfig = DEFAULT_CONFIG,
              *, lam: float | None = None) -> MixResult:
    """Shrink ``b`` to a patch and paste it into a copy of ``a``."""
    _check_pair(a, b)
    if lam is None:
        lam = sample_beta(rng, cfg.alpha)
    else:
        lam = _checked_lam(lam, closed=False)
    m = paste_region(rng, a.spatial_shape, lam)
    geo = m.geometry
    resize = resize_bilinear if cfg.resizemix_interp == "bilinear" else resize_nearest
    x = a.x.copy()
    if len(a.spatial_shape) == 1:
        patch = resize(b.x, (geo["len"],))
        x[:, geo["start"] : geo["start"] + geo["len"]] = patch
    else:
        patch = resize(b.x, (geo["h"], geo["w"]))
        x[:, geo["y0"] : geo["y0"] + geo["h"], geo["x0"] : geo["x0"] + geo["w"]] = patch
    return MixResult(
        x_mixed=x,
        y_mixed=_convex(a.y, b.y, m.lam),
        lam=m.lam,
        method="resizemix",
        mask_geometry=geo,
    )


def fmix(a: Sample, b: Sample, rng: RngState, cfg: MixerConfig = DEFAULT_CONFIG,
         *, lam: float | None = None) -> MixResult:
    """Binary selection through a thresholded low-frequency Fourier mask."""
    _check_pair(a, b)
    if lam is None:
        lam = sample_beta(rng, cfg.alpha)
    else:
        lam = _checked_lam(lam, closed=False)
    m = fourier_mask(rng, a.spatial_shape, lam, cfg.fmix_decay)
    return MixResult(
        x_mixed=_select_pixels(m.mask, a.x, b.x),
        y_mixed=_convex(a.y, b.y, m.lam),
        lam=m.lam,
        method="fmix",
        mask_geometry=m.geometry,
    )


_MIXER_FUNCS = {
    "mixup": mixup,
    "cutmix": cutmix,
    "resizemix": resizemix,
    "fmix": fmix,
}


def apply_mixer(method: str, a: Sample, b: Sample, rng: RngState,
                cfg: MixerConfig = DEFAULT_CONFIG, *, lam: float | None = None) -> MixResult:
    """Dispatch to one of the four mixers by identifier."""
    try:
        fn = _MIXER_FUNCS[method]
    except KeyError:
        raise ValueError(f"unknown mixer {method!r}; expected one of {METHODS}") from None
    return fn(a, b, rng, cfg, lam=lam)


def draw_lam_target(method: str, rng: RngState, cfg: MixerConfig) -> float:
    """Draw the lambda target a mixer would draw for itself.

    Batch pipelines use this to pull every lambda from the master stream
    before fan-out; passing the value back via ``lam=`` reproduces the
    standalone mixer draw exactly.
    """
    if method == "cutmix" and not cfg.cutmix_beta:
        return open_unit_uniform(rng)
    if method not in _MIXER_FUNCS:
        raise ValueError(f"unknown mixer {method!r}; expected one of {METHODS}")
    return sample_beta(rng, cfg.alpha)
