"""
The four base mixers, side by side
==================================

Builds two synthetic RGB images, applies mixup, cutmix, resizemix and
fmix to the same pair, and saves everything as PNGs so the four mixing
geometries can be compared visually.
"""

from pathlib import Path

import numpy as np

from mixforge import (
    MixerConfig,
    RngState,
    Sample,
    apply_mixer,
    mixed_mode,
    one_hot,
    save_image,
)

OUT = Path(__file__).parent / "output" / "01_four_mixers"
OUT.mkdir(parents=True, exist_ok=True)

SIZE = 96


def disk_image():
    # red disk on a dark background
    yy, xx = np.mgrid[0:SIZE, 0:SIZE]
    r = np.hypot(yy - SIZE / 2, xx - SIZE / 2)
    img = np.zeros((3, SIZE, SIZE), dtype=np.float32)
    img[0] = np.clip(1.2 - r / (SIZE / 3), 0, 1)
    img[2] = 0.15
    return img


def stripe_image():
    # diagonal green/blue stripes
    yy, xx = np.mgrid[0:SIZE, 0:SIZE]
    phase = ((yy + xx) // 12) % 2
    img = np.zeros((3, SIZE, SIZE), dtype=np.float32)
    img[1] = 0.2 + 0.7 * phase
    img[2] = 0.9 - 0.7 * phase
    return img


a = Sample(x=disk_image(), y=one_hot(0, 2))
b = Sample(x=stripe_image(), y=one_hot(1, 2))
save_image(a.x, OUT / "input_a.png")
save_image(b.x, OUT / "input_b.png")

# Each mixer conforms to the same contract: (a, b, rng, config) -> result
# with x_mixed, y_mixed, the mixing fraction lam, and mask geometry.
cfg = MixerConfig(alpha=1.0, fmix_decay=3.0)
for method in ("mixup", "cutmix", "resizemix", "fmix"):
    for seed in (1, 2, 3):
        res = apply_mixer(method, a, b, RngState(seed), cfg)
        save_image(res.x_mixed, OUT / f"{method}_seed{seed}.png")
        if seed == 1:
            print(
                f"{method:>9} ({mixed_mode(method):6}): lam={res.lam:.3f} "
                f"label={np.round(res.y_mixed, 3).tolist()} "
                f"geometry={res.mask_geometry}"
            )

# The mixed label is always lam * y_a + (1 - lam) * y_b with the stored
# lam, so a forced lam pins the label weighting exactly.
res = apply_mixer("mixup", a, b, RngState(0), cfg, lam=0.75)
print(f"\nforced lam=0.75 mixup label: {np.round(res.y_mixed, 3).tolist()}")
print(f"\nwrote PNGs to {OUT}")
