"""Statistical self-validation reports and the occlusion set generator.

The reports check the two random choices the pipeline makes: the lambda
drawn per pair (against its nominal distribution) and the mixer drawn per
batch (against the candidate weights).  Everything is deterministic given
(recipe, seed, trials).
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np
from scipy import special, stats

from .dataio import DataFormatError, DatasetManifest, dumps_metadata, load_payload, save_payload
from .masks import fourier_mask, occlusion_mask, paste_region, rect_mask
from .mixers import open_unit_uniform
from .randomix import MixRecipe, select_mixer
from .rng import RNG_KIND, RngState, sample_beta

LAM_BINS = 64
MIN_TRIALS = 1000

CHECK_SIGNIFICANCE = 1e-3
_QUAD_GRID = 4096


def _beta_cdf(alpha: float, x: np.ndarray) -> np.ndarray:
    return special.betainc(alpha, alpha, np.clip(x, 0.0, 1.0))


def _ks_statistic(values: np.ndarray, cdf) -> float:
    v = np.sort(values)
    n = v.size
    f = cdf(v)
    grid = np.arange(n, dtype=np.float64)
    return float(max(np.max(f - grid / n), np.max((grid + 1.0) / n - f)))


def _lam_law(method: str, recipe: MixRecipe) -> str:
    if method == "cutmix" and not recipe.cutmix_beta:
        return "uniform"
    return "beta"


def _draw_realized_lam(method: str, recipe: MixRecipe, rng: RngState, shape) -> float:
    if _lam_law(method, recipe) == "uniform":
        target = open_unit_uniform(rng)
    else:
        target = sample_beta(rng, recipe.alpha)
    if method == "mixup":
        return target
    if method == "cutmix":
        return rect_mask(rng, shape, target).lam
    if method == "resizemix":
        return paste_region(rng, shape, target).lam
    return fourier_mask(rng, shape, target, recipe.fmix_decay).lam


def _target_bin_masses(law: str, alpha: float, edges: np.ndarray) -> np.ndarray:
    if law == "uniform":
        return np.diff(edges)
    return np.diff(_beta_cdf(alpha, edges))


def expected_realized_lam_mean(method: str, recipe: MixRecipe, shape,
                               grid: int = _QUAD_GRID) -> float:
    """Exact expected mean of the lambda a candidate realizes on a shape.

    Mask generators round and clip, so their realized fraction is biased
    away from the drawn target; this computes the bias deterministically
    (enumeration over integer centers, quadrature over the target law)
    rather than assuming the nominal mean of 0.5.
    """
    shape = tuple(int(s) for s in shape)
    n = int(np.prod(shape))
    law = _lam_law(method, recipe)
    if method == "mixup":
        return 0.5  # Beta(a, a) and U(0, 1) are symmetric
    if method == "fmix":
        # realized lam is exactly ceil(target * n) / n
        ks = np.arange(1, n + 1, dtype=np.float64)
        if law == "uniform":
            masses = np.full(n, 1.0 / n)
        else:
            masses = np.diff(_beta_cdf(recipe.alpha, np.concatenate(([0.0], ks / n))))
        return float(np.sum((ks / n) * masses))
    edges = np.linspace(0.0, 1.0, grid + 1)
    mids = (edges[:-1] + edges[1:]) / 2.0
    masses = _target_bin_masses(law, recipe.alpha, edges)
    mean_area = np.ones(grid)
    for size in shape:
        if len(shape) == 1:
            cuts = np.rint(size * (1.0 - mids))
        else:
            cuts = np.rint(size * np.sqrt(1.0 - mids))
        if method == "resizemix":
            lengths = np.clip(cuts, 1, size)
        else:
            # cut rectangle: average the clipped extent over integer centers
            centers = np.arange(size, dtype=np.float64)
            lo = centers[None, :] - np.floor(cuts[:, None] / 2.0)
            hi = lo + cuts[:, None]
            lengths = np.clip(np.minimum(hi, size) - np.maximum(lo, 0.0), 0.0, None)
            lengths = lengths.mean(axis=1)
        mean_area = mean_area * lengths
    return float(np.sum(masses * (1.0 - mean_area / n)))


def lam_distribution_report(recipe: MixRecipe, shape, trials: int, rng: RngState,
                            bins: int = LAM_BINS) -> dict:
    """Empirical lambda histogram, moments and KS statistic per candidate.

    For mask-mode candidates the recorded lambda is the realized mask
    fraction on the given spatial shape, exactly as label mixing sees it.
    """
    recipe.validate()
    trials = int(trials)
    if trials < MIN_TRIALS:
        raise ValueError(f"trials must be at least {MIN_TRIALS}")
    shape = tuple(int(s) for s in shape)
    subs = rng.split(len(recipe.candidates))
    methods: dict[str, dict] = {}
    for method, sub in zip(recipe.candidates, subs):
        lams = np.empty(trials, dtype=np.float64)
        for t in range(trials):
            lams[t] = _draw_realized_lam(method, recipe, sub, shape)
        hist, _ = np.histogram(lams, bins=bins, range=(0.0, 1.0))
        law = _lam_law(method, recipe)
        if law == "uniform":
            cdf = lambda x: np.clip(x, 0.0, 1.0)
            nominal = "uniform(0,1)"
        else:
            alpha = recipe.alpha
            cdf = lambda x, a=alpha: _beta_cdf(a, x)
            nominal = f"beta({recipe.alpha},{recipe.alpha})"
        methods[method] = {
            "law": law,
            "nominal": nominal,
            "hist": [int(c) for c in hist],
            "mean": float(lams.mean()),
            "variance": float(lams.var()),
            "ks_statistic": _ks_statistic(lams, cdf),
        }
    return {
        "kind": "lam_distribution",
        "shape": list(shape),
        "trials": trials,
        "bins": bins,
        "alpha": recipe.alpha,
        "methods": methods,
    }


def method_frequency_report(recipe: MixRecipe, trials: int, rng: RngState) -> dict:
    """Observed candidate frequencies with a chi-square goodness-of-fit."""
    recipe.validate()
    trials = int(trials)
    if trials < MIN_TRIALS:
        raise ValueError(f"trials must be at least {MIN_TRIALS}")
    w = np.asarray(recipe.weights, dtype=np.float64)
    probs = w / w.sum()
    counts = np.zeros(len(recipe.candidates), dtype=np.int64)
    index = {m: i for i, m in enumerate(recipe.candidates)}
    for _ in range(trials):
        counts[index[select_mixer(recipe, rng)]] += 1
    expected = probs * trials
    nonzero = expected > 0
    chi2 = float(np.sum((counts[nonzero] - expected[nonzero]) ** 2 / expected[nonzero]))
    dof = int(nonzero.sum()) - 1
    p_value = float(stats.chi2.sf(chi2, dof)) if dof >= 1 else 1.0
    return {
        "kind": "method_frequency",
        "trials": trials,
        "candidates": list(recipe.candidates),
        "weights": [float(x) for x in recipe.weights],
        "observed": [int(c) for c in counts],
        "frequencies": [float(c / trials) for c in counts],
        "expected_frequencies": [float(p) for p in probs],
        "chi_square": chi2,
        "dof": dof,
        "p_value": p_value,
    }


def statistical_checks(lam_report: dict, freq_report: dict, recipe: MixRecipe) -> dict:
    """Pass/fail gates over the two reports.

    Gates: candidate frequencies pass chi-square at significance 1e-3;
    every candidate's mean lambda sits within 4 standard errors of its
    exact expected value (mask rounding/clipping bias included); linear
    (mixup) lambdas pass a KS test against their nominal distribution at
    significance 1e-3.
    """
    trials = lam_report["trials"]
    shape = lam_report["shape"]
    checks: dict[str, bool] = {}
    checks["frequency_chi_square"] = freq_report["p_value"] > CHECK_SIGNIFICANCE
    for method, entry in lam_report["methods"].items():
        expected = expected_realized_lam_mean(method, recipe, shape)
        stderr = math.sqrt(max(entry["variance"], 1e-12) / trials)
        checks[f"{method}_mean"] = abs(entry["mean"] - expected) <= 4.0 * stderr + 1e-3
        if method == "mixup":
            p = float(stats.kstwo.sf(entry["ks_statistic"], trials))
            checks["mixup_ks"] = p > CHECK_SIGNIFICANCE
    checks["all_pass"] = all(checks.values())
    return checks


def write_reports(lam_report: dict, freq_report: dict, recipe: MixRecipe, out_dir) -> dict:
    """Emit the histogram CSV and the JSON summary; returns written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "lam_histograms.csv"
    bins = lam_report["bins"]
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "bin_lo", "bin_hi", "count"])
        for method, entry in lam_report["methods"].items():
            for i, count in enumerate(entry["hist"]):
                writer.writerow([method, i / bins, (i + 1) / bins, count])
    summary = {
        "schema_version": 1,
        "lam_distribution": {
            k: {f: v for f, v in entry.items() if f != "hist"}
            for k, entry in lam_report["methods"].items()
        },
        "lam_settings": {key: lam_report[key] for key in ("shape", "trials", "bins", "alpha")},
        "method_frequency": freq_report,
        "checks": statistical_checks(lam_report, freq_report, recipe),
    }
    json_path = out / "summary.json"
    json_path.write_text(dumps_metadata(summary))
    return {"csv": csv_path, "json": json_path}


class OcclusionAborted(OSError):
    """An IO failure stopped the run; ``completed`` files were written."""

    def __init__(self, message: str, completed: int):
        super().__init__(f"{message} (completed {completed} files)")
        self.completed = completed


def make_occluded_set(manifest: DatasetManifest, occluded_fraction: float,
                      rng: RngState, out_dir) -> int:
    """Write a zero-block-occluded copy of every manifest entry.

    Output names are ``{index:05d}_{original name}`` plus one
    ``occlusion.json`` metadata document; returns the number written.
    """
    occluded_fraction = float(occluded_fraction)
    if not 0.0 < occluded_fraction < 1.0:
        raise ValueError("occluded_fraction must lie strictly inside (0, 1)")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    subs = rng.split(len(manifest.entries))
    written = 0
    files = []
    for i, (path, _) in enumerate(manifest.entries):
        try:
            payload = load_payload(path, manifest.kind)
            mask = occlusion_mask(subs[i], payload.shape[1:], occluded_fraction)
            occluded = payload * mask.mask[np.newaxis]
            out_name = f"{i:05d}_{Path(path).name}"
            save_payload(occluded, out / out_name, manifest.kind)
        except (OSError, DataFormatError) as err:
            raise OcclusionAborted(str(err), written) from err
        written += 1
        files.append({
            "source": path,
            "output": out_name,
            "lam": float(mask.lam),
            "geometry": mask.geometry,
        })
    meta = {
        "schema_version": 1,
        "kind": "occlusion",
        "rng": RNG_KIND,
        "seed": int(rng.seed),
        "occluded_fraction": occluded_fraction,
        "files": files,
    }
    (out / "occlusion.json").write_text(dumps_metadata(meta))
    return written
