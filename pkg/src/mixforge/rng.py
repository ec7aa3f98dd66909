"""Deterministic random streams and the samplers every stage draws from.

A single :class:`RngState` owns one counter-based (Philox) stream.  Equal
seeds give equal draw sequences run after run; parallel work never shares a
state but receives children from :meth:`RngState.split` before fan-out, so
worker count can never change results.
"""

from __future__ import annotations

import math

import numpy as np

# Generator identifier recorded in provenance metadata.
RNG_KIND = "philox4x64"

_MAX_SEED = 2**64

# Nearest doubles inside (0, 1); endpoint draws are clamped onto these so
# the open-interval contract survives IEEE rounding at extreme parameters.
_OPEN_LO = 5e-324
_OPEN_HI = 1.0 - 2.0**-53


class RngState:
    """Single-owner deterministic random stream.

    Advanced linearly by every draw; never share one instance across
    concurrent tasks.  ``split`` derives independent child streams whose
    identity depends only on the seed and the order of split calls.
    """

    __slots__ = ("seed", "_seq", "_gen")

    def __init__(self, seed: int, _seq: np.random.SeedSequence | None = None):
        if _seq is None:
            seed = int(seed)
            if not 0 <= seed < _MAX_SEED:
                raise ValueError("seed must be a 64-bit unsigned integer")
            _seq = np.random.SeedSequence(seed)
        self.seed = int(seed)
        self._seq = _seq
        self._gen = np.random.Generator(np.random.Philox(_seq))

    def __repr__(self) -> str:
        return f"RngState(seed={self.seed})"

    def random(self, n: int | None = None):
        """Uniform float64 draw(s) in [0, 1)."""
        if n is None:
            return float(self._gen.random())
        return self._gen.random(int(n))

    def normal(self, n: int) -> np.ndarray:
        """Standard normal draws (Box-Muller over the uniform stream).

        Consumes exactly ``2 * ceil(n/2)`` uniforms, so the stream layout
        is a pure function of the requested count.
        """
        n = int(n)
        if n < 0:
            raise ValueError("n must be non-negative")
        m = (n + 1) // 2
        u1 = 1.0 - self._gen.random(m)  # (0, 1]: keeps the log finite
        u2 = self._gen.random(m)
        r = np.sqrt(-2.0 * np.log(u1))
        theta = (2.0 * np.pi) * u2
        z = np.empty(2 * m)
        z[0::2] = r * np.cos(theta)
        z[1::2] = r * np.sin(theta)
        return z[:n]

    def normal_scalar(self) -> float:
        """One standard normal draw (cosine half of a Box-Muller pair)."""
        u1 = 1.0 - self._gen.random()
        u2 = self._gen.random()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def randbelow(self, k: int) -> int:
        """Uniform integer on 0..k-1 (bias O(k / 2**53), negligible)."""
        k = int(k)
        if k < 1:
            raise ValueError("k must be positive")
        j = int(self._gen.random() * k)
        return min(j, k - 1)

    def split(self, n: int) -> list["RngState"]:
        """Derive ``n`` independent child streams.

        Children are a function of this state's seed lineage and the order
        of split calls, not of how many values were drawn in between.
        """
        n = int(n)
        if n < 1:
            raise ValueError("n must be positive")
        return [RngState(self.seed, _seq=child) for child in self._seq.spawn(n)]

    def child_seed(self) -> int:
        """Draw a fresh recordable 64-bit seed for a derived root stream."""
        return int(self._gen.integers(0, _MAX_SEED, dtype=np.uint64))


def _require_positive_finite(value: float, name: str) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be positive and finite, got {value!r}")
    return value


def _gamma_mt(rng: RngState, alpha: float) -> float:
    """Marsaglia-Tsang Gamma(alpha, 1) draw; requires alpha >= 1."""
    d = alpha - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    while True:
        x = rng.normal_scalar()
        t = 1.0 + c * x
        if t <= 0.0:
            continue
        v = t * t * t
        u = rng.random()
        if u < 1.0 - 0.0331 * (x * x) * (x * x):
            return d * v
        if math.log(u) < 0.5 * x * x + d * (1.0 - v + math.log(v)):
            return d * v


def _log_gamma_boosted(rng: RngState, alpha: float) -> float:
    """log of a Gamma(alpha, 1) draw for alpha < 1.

    Uses the boosting identity Gamma(alpha) = Gamma(alpha + 1) * U**(1/alpha)
    in log space, which stays finite where the direct product underflows.
    """
    g = _gamma_mt(rng, alpha + 1.0)
    u = rng.random()
    while u == 0.0:
        u = rng.random()
    return math.log(g) + math.log(u) / alpha


def sample_beta(rng: RngState, alpha: float) -> float:
    """One draw from Beta(alpha, alpha), strictly inside (0, 1).

    Built from two Gamma(alpha, 1) draws as G1 / (G1 + G2); the gammas come
    from Marsaglia-Tsang, with the boosting transform below alpha = 1, so
    the distribution is exact for every positive alpha.
    """
    alpha = _require_positive_finite(alpha, "alpha")
    if alpha >= 1.0:
        g1 = _gamma_mt(rng, alpha)
        g2 = _gamma_mt(rng, alpha)
        b = g1 / (g1 + g2)
    else:
        # Work with log-gammas: tiny alphas underflow the direct ratio.
        t = _log_gamma_boosted(rng, alpha) - _log_gamma_boosted(rng, alpha)
        if t >= 0.0:
            b = 1.0 / (1.0 + math.exp(-t))
        else:
            e = math.exp(t)
            b = e / (1.0 + e)
    return min(max(b, _OPEN_LO), _OPEN_HI)


def sample_uniform(rng: RngState, lo: float, hi: float) -> float:
    """One draw from U[lo, hi)."""
    lo = float(lo)
    hi = float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise ValueError(f"need lo < hi, got [{lo!r}, {hi!r})")
    x = lo + rng.random() * (hi - lo)
    if x >= hi:  # half-ulp rounding at the top end
        x = math.nextafter(hi, lo)
    return x


def rand_perm(rng: RngState, n: int) -> np.ndarray:
    """Uniform random permutation of 0..n-1 (Fisher-Yates)."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    us = rng.random(n - 1)
    perm = list(range(n))
    k = 0
    for i in range(n - 1, 0, -1):
        j = int(us[k] * (i + 1))
        k += 1
        perm[i], perm[j] = perm[j], perm[i]
    return np.asarray(perm, dtype=np.int64)


def rand_choice_weighted(rng: RngState, weights) -> int:
    """Index i with probability weights[i] / sum(weights).

    Zero-weight entries are never selected; all-zero, negative or
    non-finite weights are rejected.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("weights must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite")
    if np.any(w < 0.0):
        raise ValueError("weights must be non-negative")
    cum = np.cumsum(w)
    total = float(cum[-1])
    if total <= 0.0:
        raise ValueError("at least one weight must be positive")
    x = rng.random() * total
    if x >= total:
        x = math.nextafter(total, 0.0)
    return int(np.searchsorted(cum, x, side="right"))
