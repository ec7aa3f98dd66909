"""
Low-frequency fields and the masks they make
============================================

Samples random fields whose spectra decay as 1/||f||^decay, thresholds
them into binary masks, and shows how the decay exponent controls blob
contiguity (few large blobs at high decay, speckle at low decay).
"""

from pathlib import Path

import numpy as np

from mixforge import RngState, fourier_mask, sample_low_freq_field, save_image

OUT = Path(__file__).parent / "output" / "03_fourier_masks"
OUT.mkdir(parents=True, exist_ok=True)

SHAPE = (96, 96)


def components(mask):
    # quick 4-connected component count for the printout
    m = mask != 0
    seen = np.zeros_like(m, dtype=bool)
    count = 0
    for i in range(m.shape[0]):
        for j in range(m.shape[1]):
            if m[i, j] and not seen[i, j]:
                count += 1
                stack = [(i, j)]
                seen[i, j] = True
                while stack:
                    y, x = stack.pop()
                    for ny, nx in ((y + 1, x), (y - 1, x), (y, x + 1), (y, x - 1)):
                        if (
                            0 <= ny < m.shape[0]
                            and 0 <= nx < m.shape[1]
                            and m[ny, nx]
                            and not seen[ny, nx]
                        ):
                            seen[ny, nx] = True
                            stack.append((ny, nx))
    return count


# The raw field, rescaled into [0, 1] for viewing.
field = sample_low_freq_field(RngState(1), SHAPE, decay=3.0)
view = (field - field.min()) / (field.max() - field.min())
save_image(view[np.newaxis].astype(np.float32), OUT / "field_decay3.png")
print(f"field stats: mean={field.mean():.2e} var={field.var():.4f}")

# Thresholding keeps exactly ceil(lam * N) elements, so the realized lam
# is exact by construction; the decay exponent shapes the 1-region.
for decay in (1.0, 2.0, 3.0, 6.0):
    mask = fourier_mask(RngState(42), SHAPE, lam_target=0.5, decay=decay)
    save_image(mask.mask[np.newaxis], OUT / f"mask_decay{decay:g}.png")
    print(
        f"decay={decay:3g}: lam={mask.lam} ones={int(mask.mask.sum())} "
        f"components={components(mask.mask)}"
    )

# Tiny targets still get ceil(lam * N) >= 1 elements.
tiny = fourier_mask(RngState(3), (32, 32), lam_target=0.001)
print(f"\nlam_target=0.001 on 32x32 -> {int(tiny.mask.sum())} ones (ceil(1.024) = 2)")
print(f"\nwrote PNGs to {OUT}")
