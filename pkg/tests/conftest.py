import numpy as np
import pytest

from mixforge import RngState, Sample, one_hot


def make_image(seed: int, c: int = 3, h: int = 16, w: int = 16) -> np.ndarray:
    """Random image tensor on the 8-bit grid (survives PNG round-trips)."""
    g = np.random.default_rng(seed)
    return (g.integers(0, 256, size=(c, h, w)) / 255.0).astype(np.float32)


def make_audio(seed: int, length: int = 1000) -> np.ndarray:
    g = np.random.default_rng(seed)
    return g.random((1, length)).astype(np.float32)


def make_sample(seed: int, *, kind: str = "image", num_classes: int = 10, **shape) -> Sample:
    g = np.random.default_rng(seed + 1)
    label = one_hot(int(g.integers(num_classes)), num_classes)
    x = make_image(seed, **shape) if kind == "image" else make_audio(seed, **shape)
    return Sample(x=x, y=label)


@pytest.fixture
def rng():
    return RngState(20260808)


@pytest.fixture
def image_pair():
    return make_sample(11), make_sample(22)


@pytest.fixture
def audio_pair():
    return make_sample(33, kind="audio"), make_sample(44, kind="audio")
