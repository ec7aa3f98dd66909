"""Boundary conversion between on-disk formats and in-memory samples.

Images are 8-bit PNG only (lossless, so mask boundaries survive a
round-trip); audio is raw little-endian float32 mono in [-1, 1], rescaled
to the [0, 1] tensor range on load and rescaled back on export.  Batch
provenance goes to a canonical JSON document sufficient for bit-exact
replay.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .randomix import MixedBatch, MixRecipe, mix_batch
from .rng import RNG_KIND, RngState
from .tensor import Sample, as_payload, one_hot

SCHEMA_VERSION = 1

AUDIO_SUFFIXES = (".f32", ".raw")


class DataFormatError(ValueError):
    """File content that does not match the supported formats."""


def load_image(path) -> np.ndarray:
    """Decode an 8-bit RGB or grayscale PNG into a C x H x W tensor (v/255)."""
    path = Path(path)
    try:
        with Image.open(path) as im:
            if im.format != "PNG":
                raise DataFormatError(f"{path}: not a PNG file (format {im.format!r})")
            if im.mode not in ("L", "RGB"):
                raise DataFormatError(
                    f"{path}: unsupported PNG mode {im.mode!r}; need 8-bit L or RGB"
                )
            arr = np.asarray(im, dtype=np.uint8)
    except UnidentifiedImageError as err:
        raise DataFormatError(f"{path}: not a decodable image: {err}") from None
    if arr.ndim == 2:
        arr = arr[np.newaxis]
    else:
        arr = arr.transpose(2, 0, 1)
    return np.ascontiguousarray(arr.astype(np.float32) / 255.0)


def save_image(t, path):
    """Encode a C x H x W tensor (1 or 3 channels, values in [0, 1]) as 8-bit PNG."""
    a = as_payload(t)
    if a.ndim != 3 or a.shape[0] not in (1, 3):
        raise ValueError(f"expected a rank-3 tensor with 1 or 3 channels, got shape {a.shape}")
    q = np.rint(a.astype(np.float64) * 255.0).astype(np.uint8)
    if a.shape[0] == 1:
        im = Image.fromarray(q[0], mode="L")
    else:
        im = Image.fromarray(q.transpose(1, 2, 0), mode="RGB")
    im.save(Path(path), format="PNG")


def load_audio_raw(path) -> np.ndarray:
    """Decode raw little-endian float32 mono in [-1, 1] into a 1 x L tensor."""
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) == 0:
        raise DataFormatError(f"{path}: empty audio stream")
    if len(raw) % 4 != 0:
        raise DataFormatError(f"{path}: length {len(raw)} is not a multiple of 4 bytes")
    v = np.frombuffer(raw, dtype="<f4").astype(np.float64)
    if not np.all(np.isfinite(v)) or v.min() < -1.0 or v.max() > 1.0:
        raise DataFormatError(f"{path}: sample values must be finite and lie in [-1, 1]")
    return ((v + 1.0) / 2.0).astype(np.float32)[np.newaxis]


def save_audio_raw(t, path):
    """Encode a 1 x L tensor back to raw float32 mono via v*2 - 1."""
    a = as_payload(t)
    if a.ndim != 2 or a.shape[0] != 1:
        raise ValueError(f"expected a rank-2 mono tensor (1 x L), got shape {a.shape}")
    out = (a[0].astype(np.float64) * 2.0 - 1.0).astype("<f4")
    Path(path).write_bytes(out.tobytes())


@dataclass(frozen=True)
class DatasetManifest:
    """Paths with integer class labels, plus the payload kind."""

    entries: tuple[tuple[str, int], ...]
    num_classes: int
    kind: str  # "image" | "audio"

    def __post_init__(self):
        object.__setattr__(
            self, "entries", tuple((str(p), int(c)) for p, c in self.entries)
        )
        if not self.entries:
            raise ValueError("manifest must contain at least one entry")
        if self.kind not in ("image", "audio"):
            raise ValueError(f"manifest kind must be image or audio, got {self.kind!r}")
        paths = [p for p, _ in self.entries]
        if len(set(paths)) != len(paths):
            raise ValueError("manifest paths must be unique")
        for p, c in self.entries:
            if not 0 <= c < self.num_classes:
                raise ValueError(f"class index {c} for {p} out of range ({self.num_classes} classes)")


def _kind_from_suffix(path: str) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".png":
        return "image"
    if suffix in AUDIO_SUFFIXES:
        return "audio"
    raise DataFormatError(f"cannot infer payload kind from suffix of {path!r}")


def load_manifest(path) -> DatasetManifest:
    """Read a ``path,class`` CSV; classes are derived as 0..max."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["path", "class"]:
        raise DataFormatError(f"{path}: first line must be the header 'path,class'")
    entries = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 2:
            raise DataFormatError(f"{path}:{lineno}: expected 'path,class', got {row!r}")
        try:
            entries.append((row[0].strip(), int(row[1])))
        except ValueError:
            raise DataFormatError(f"{path}:{lineno}: class index {row[1]!r} is not an integer") from None
    if not entries:
        raise DataFormatError(f"{path}: no entries")
    kinds = {_kind_from_suffix(p) for p, _ in entries}
    if len(kinds) != 1:
        raise DataFormatError(f"{path}: mixed payload kinds {sorted(kinds)}")
    num_classes = max(c for _, c in entries) + 1
    return DatasetManifest(tuple(entries), num_classes, kinds.pop())


def save_manifest(manifest: DatasetManifest, path):
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path", "class"])
        for p, c in manifest.entries:
            writer.writerow([p, c])


def load_payload(path, kind: str) -> np.ndarray:
    if kind == "image":
        return load_image(path)
    if kind == "audio":
        return load_audio_raw(path)
    raise ValueError(f"unknown payload kind {kind!r}")


def save_payload(t, path, kind: str):
    if kind == "image":
        save_image(t, path)
    elif kind == "audio":
        save_audio_raw(t, path)
    else:
        raise ValueError(f"unknown payload kind {kind!r}")


def load_sample(path, class_index: int, num_classes: int, kind: str) -> Sample:
    """Load one payload and one-hot encode its label."""
    return Sample(x=load_payload(path, kind), y=one_hot(class_index, num_classes))


def batch_metadata(batch: MixedBatch) -> dict:
    """Provenance document for a mixed batch (JSON-ready)."""
    chosen = batch.chosen_method
    meta = {
        "schema_version": SCHEMA_VERSION,
        "rng": RNG_KIND,
        "seed": int(batch.seed),
        "recipe": batch.recipe.to_dict(),
        "permutation": [int(v) for v in batch.pairing],
        "chosen_method": chosen if isinstance(chosen, str) else list(chosen),
        "per_pair_selection": bool(batch.per_pair_selection),
        "lam_per_batch": bool(batch.lam_per_batch),
        "pairs": [
            {
                "source_a": i,
                "source_b": int(batch.pairing[i]),
                "method": res.method,
                "lam": float(res.lam),
                "geometry": res.mask_geometry,
            }
            for i, res in enumerate(batch.results)
        ],
    }
    return meta


def dumps_metadata(meta: dict) -> str:
    """Canonical serialization: byte-stable through parse -> serialize."""
    return json.dumps(meta, sort_keys=True, indent=2) + "\n"


def write_metadata(batch: MixedBatch, path):
    Path(path).write_text(dumps_metadata(batch_metadata(batch)))


def read_metadata(path) -> dict:
    meta = json.loads(Path(path).read_text())
    version = meta.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DataFormatError(f"{path}: unsupported schema_version {version!r}")
    return meta


def replay_batch(meta: dict, samples) -> MixedBatch:
    """Regenerate a mixed batch bit-exactly from its metadata and inputs."""
    recipe = MixRecipe.from_dict(meta["recipe"])
    out = mix_batch(
        samples,
        recipe,
        RngState(int(meta["seed"])),
        per_pair_selection=bool(meta.get("per_pair_selection", False)),
        lam_per_batch=bool(meta.get("lam_per_batch", False)),
    )
    replayed = [int(v) for v in out.pairing]
    if replayed != [int(v) for v in meta["permutation"]]:
        raise ValueError("replayed permutation does not match metadata; wrong inputs or seed")
    return out
