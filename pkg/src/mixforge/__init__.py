"""Deterministic mixed-sample data augmentation.

Four base mixers (mixup, cutmix, resizemix, fmix) behind one contract,
combined by random batch pairing plus weighted random method selection,
with seeded reproducibility and full provenance metadata.
"""

from .dataio import (
    DataFormatError,
    DatasetManifest,
    batch_metadata,
    dumps_metadata,
    load_audio_raw,
    load_image,
    load_manifest,
    load_sample,
    read_metadata,
    replay_batch,
    save_audio_raw,
    save_image,
    save_manifest,
    write_metadata,
)
from .fourier import Spectrum, forward_real, inverse_real, sample_low_freq_field
from .masks import MixMask, fourier_mask, occlusion_mask, paste_region, rect_mask
from .mixers import (
    METHODS,
    MixerConfig,
    MixResult,
    apply_mixer,
    cutmix,
    fmix,
    mixed_mode,
    mixup,
    resizemix,
)
from .randomix import (
    DEFAULT_RECIPE,
    MixedBatch,
    MixRecipe,
    RecipeError,
    mix_batch,
    pair_batch,
    select_mixer,
)
from .resample import resize_bilinear, resize_nearest
from .rng import (
    RNG_KIND,
    RngState,
    rand_choice_weighted,
    rand_perm,
    sample_beta,
    sample_uniform,
)
from .tensor import Sample, as_payload, as_soft_label, one_hot
from .validate import (
    OcclusionAborted,
    expected_realized_lam_mean,
    lam_distribution_report,
    make_occluded_set,
    method_frequency_report,
    statistical_checks,
    write_reports,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_RECIPE",
    "DataFormatError",
    "DatasetManifest",
    "METHODS",
    "MixMask",
    "MixRecipe",
    "MixResult",
    "MixedBatch",
    "MixerConfig",
    "OcclusionAborted",
    "RNG_KIND",
    "RecipeError",
    "RngState",
    "Sample",
    "Spectrum",
    "apply_mixer",
    "as_payload",
    "as_soft_label",
    "batch_metadata",
    "cutmix",
    "dumps_metadata",
    "expected_realized_lam_mean",
    "fmix",
    "forward_real",
    "fourier_mask",
    "inverse_real",
    "lam_distribution_report",
    "load_audio_raw",
    "load_image",
    "load_manifest",
    "load_sample",
    "make_occluded_set",
    "method_frequency_report",
    "mix_batch",
    "mixed_mode",
    "mixup",
    "occlusion_mask",
    "one_hot",
    "pair_batch",
    "paste_region",
    "rand_choice_weighted",
    "rand_perm",
    "read_metadata",
    "rect_mask",
    "replay_batch",
    "resize_bilinear",
    "resize_nearest",
    "resizemix",
    "sample_beta",
    "sample_low_freq_field",
    "sample_uniform",
    "save_audio_raw",
    "save_image",
    "save_manifest",
    "select_mixer",
    "statistical_checks",
    "write_metadata",
    "write_reports",
]
