"""Sample containers and the value checks shared by every stage.

Payloads are plain float32 numpy arrays, channels first: rank 3 ``C x H x W``
for images, rank 2 ``C x L`` for audio, values in [0, 1].  Masks carry only
0.0 and 1.0.  Labels are probability vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SOFT_LABEL_ATOL = 1e-5


def as_payload(arr) -> np.ndarray:
    """Validate and return a payload tensor as contiguous float32.

    Accepts rank 2 (audio) or rank 3 (image) arrays with values in [0, 1].
    """
    a = np.ascontiguousarray(arr, dtype=np.float32)
    if a.ndim not in (2, 3):
        raise ValueError(f"payload must be rank 2 (CxL) or rank 3 (CxHxW), got rank {a.ndim}")
    if a.size == 0:
        raise ValueError("payload must be non-empty")
    if not np.all(np.isfinite(a)):
        raise ValueError("payload values must be finite")
    lo = float(a.min())
    hi = float(a.max())
    if lo < 0.0 or hi > 1.0:
        raise ValueError(f"payload values must lie in [0, 1], got range [{lo}, {hi}]")
    return a


def check_mask_values(arr) -> np.ndarray:
    """Validate a binary mask array (only 0.0 and 1.0 entries)."""
    a = np.ascontiguousarray(arr, dtype=np.float32)
    if not np.all((a == 0.0) | (a == 1.0)):
        raise ValueError("mask must contain only 0.0 and 1.0")
    return a


def as_soft_label(probs, atol: float = SOFT_LABEL_ATOL) -> np.ndarray:
    """Validate a class-probability vector: non-negative, sums to 1."""
    y = np.ascontiguousarray(probs, dtype=np.float32)
    if y.ndim != 1 or y.size == 0:
        raise ValueError("soft label must be a non-empty vector")
    if not np.all(np.isfinite(y)):
        raise ValueError("soft label values must be finite")
    if np.any(y < 0.0):
        raise ValueError("soft label values must be non-negative")
    total = float(y.sum(dtype=np.float64))
    if abs(total - 1.0) > atol:
        raise ValueError(f"soft label must sum to 1 within {atol}, got {total}")
    return y


def one_hot(class_index: int, num_classes: int) -> np.ndarray:
    """One-hot probability vector for a single class index."""
    class_index = int(class_index)
    num_classes = int(num_classes)
    if num_classes < 1:
        raise ValueError("num_classes must be positive")
    if not 0 <= class_index < num_classes:
        raise ValueError(f"class index {class_index} out of range for {num_classes} classes")
    y = np.zeros(num_classes, dtype=np.float32)
    y[class_index] = 1.0
    return y


@dataclass(frozen=True)
class Sample:
    """One training sample: a payload tensor plus its soft label."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", as_payload(self.x))
        object.__setattr__(self, "y", as_soft_label(self.y))

    @property
    def spatial_shape(self) -> tuple[int, ...]:
        """Spatial dims without the channel axis: (H, W) or (L,)."""
        return tuple(self.x.shape[1:])
