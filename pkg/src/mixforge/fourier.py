"""Real-input discrete Fourier transforms and low-frequency field synthesis.

Transforms cover rank-1 and rank-2 fields of arbitrary size (mixed radix
with a Bluestein fallback for primes, via pocketfft) and use the plain
unnormalized-forward / 1/N-inverse convention: a constant field of value c
and size N has DC coefficient N*c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import RngState, _require_positive_finite


def _checked_spatial_shape(shape, min_dim: int = 1) -> tuple[int, ...]:
    dims = tuple(int(s) for s in shape)
    if len(dims) not in (1, 2):
        raise ValueError(f"spatial shape must be rank 1 or 2, got {dims!r}")
    if any(s < min_dim for s in dims):
        raise ValueError(f"every dimension must be >= {min_dim}, got {dims!r}")
    return dims


def _half_spectrum_shape(shape: tuple[int, ...]) -> tuple[int, ...]:
    return shape[:-1] + (shape[-1] // 2 + 1,)


@dataclass(frozen=True)
class Spectrum:
    """Half-spectrum (real-FFT layout) coefficients of a real field.

    ``coeffs`` has shape ``shape[:-1] + (shape[-1]//2 + 1,)``; coefficients
    implied by Hermitian symmetry are never stored twice.
    """

    shape: tuple[int, ...]
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "shape", tuple(int(s) for s in self.shape))
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=np.complex128))
        expected = _half_spectrum_shape(self.shape)
        if tuple(self.coeffs.shape) != expected:
            raise ValueError(
                f"coefficient array shape {self.coeffs.shape} does not match "
                f"half-spectrum layout {expected} for field shape {self.shape}"
            )


def forward_real(field) -> Spectrum:
    """Forward DFT of a real rank-1 or rank-2 field."""
    a = np.asarray(field, dtype=np.float64)
    shape = _checked_spatial_shape(a.shape)
    return Spectrum(shape, np.fft.rfftn(a))


def inverse_real(spec: Spectrum) -> np.ndarray:
    """Inverse of :func:`forward_real`; returns the real field as float32."""
    if not isinstance(spec, Spectrum):
        spec = Spectrum(*spec)
    out = np.fft.irfftn(spec.coeffs, s=spec.shape, axes=range(len(spec.shape)))
    return out.astype(np.float32)


def normalized_freq_norm(shape: tuple[int, ...]) -> np.ndarray:
    """Euclidean norm of per-axis normalized frequencies, half-spectrum layout.

    Per axis the normalized frequency of bin k is min(k, N-k)/N; the last
    axis is stored in real-FFT half layout.
    """
    shape = _checked_spatial_shape(shape)
    axes = []
    for i, n in enumerate(shape):
        k = np.arange(n)
        f = np.minimum(k, n - k) / n
        if i == len(shape) - 1:
            f = f[: n // 2 + 1]
        axes.append(f)
    if len(axes) == 1:
        return axes[0]
    fy, fx = axes
    return np.sqrt(fy[:, None] ** 2 + fx[None, :] ** 2)


def sample_low_freq_field(rng: RngState, shape, decay: float) -> np.ndarray:
    """Random real field whose spectrum decays as 1 / ||f||**decay.

    Draws i.i.d. standard complex Gaussian half-spectrum coefficients,
    scales the coefficient at frequency f by 1 / max(||f||, f_min)**decay
    with f_min = 1/max(shape) guarding the DC bin, inverse-transforms, and
    normalizes the result to zero mean and unit variance.
    """
    shape = _checked_spatial_shape(shape, min_dim=2)
    decay = _require_positive_finite(decay, "decay")
    freq = normalized_freq_norm(shape)
    f_min = 1.0 / max(shape)
    scale = 1.0 / np.maximum(freq, f_min) ** decay
    m = scale.size
    z = rng.normal(2 * m)
    coeffs = (z[:m] + 1j * z[m:]).reshape(scale.shape) * scale
    field = np.fft.irfftn(coeffs, s=shape, axes=range(len(shape)))
    field -= field.mean()
    sd = math.sqrt(float(np.mean(field * field)))
    field /= sd
    return field.astype(np.float32)
