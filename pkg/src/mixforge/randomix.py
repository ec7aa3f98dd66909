"""Batch pairing and weighted mixer selection.

A batch is mixed in three deterministic steps: pair each sample with a
random permutation of the batch, pick a mixer from the weighted candidate
list, and apply it pairwise.  The permutation, the method choice and every
pair's lambda target are drawn sequentially from the master stream before
any fan-out, so the number of workers never changes the output.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .mixers import (
    METHODS,
    MixerConfig,
    MixResult,
    apply_mixer,
    draw_lam_target,
)
from .rng import RngState, rand_choice_weighted, rand_perm
from .tensor import Sample


class RecipeError(ValueError):
    """An invalid candidate/weight configuration."""


@dataclass(frozen=True)
class MixRecipe:
    """An ordered candidate list with selection weights and mixer knobs."""

    candidates: tuple[str, ...]
    weights: tuple[float, ...]
    alpha: float = 1.0
    fmix_decay: float = 3.0
    resizemix_interp: str = "bilinear"
    cutmix_beta: bool = False

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(str(c) for c in self.candidates))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        self.validate()

    def validate(self):
        if not self.candidates:
            raise RecipeError("candidates must be non-empty")
        unknown = [c for c in self.candidates if c not in METHODS]
        if unknown:
            raise RecipeError(f"unknown candidates {unknown}; expected from {METHODS}")
        if len(set(self.candidates)) != len(self.candidates):
            raise RecipeError("candidates must not repeat")
        if len(self.weights) != len(self.candidates):
            raise RecipeError("weights must match candidates one-to-one")
        if any(not math.isfinite(w) or w < 0 for w in self.weights):
            raise RecipeError("weights must be finite and non-negative")
        if not any(w > 0 for w in self.weights):
            raise RecipeError("at least one weight must be positive")
        try:
            self.mixer_config()
        except ValueError as err:
            raise RecipeError(str(err)) from None

    def mixer_config(self) -> MixerConfig:
        return MixerConfig(
            alpha=self.alpha,
            fmix_decay=self.fmix_decay,
            resizemix_interp=self.resizemix_interp,
            cutmix_beta=self.cutmix_beta,
        )

    def to_dict(self) -> dict:
        return {
            "candidates": list(self.candidates),
            "weights": list(self.weights),
            "alpha": self.alpha,
            "fmix_decay": self.fmix_decay,
            "resizemix_interp": self.resizemix_interp,
            "cutmix_beta": self.cutmix_beta,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MixRecipe":
        try:
            return cls(
                candidates=tuple(d["candidates"]),
                weights=tuple(d["weights"]),
                alpha=float(d.get("alpha", 1.0)),
                fmix_decay=float(d.get("fmix_decay", 3.0)),
                resizemix_interp=str(d.get("resizemix_interp", "bilinear")),
                cutmix_beta=bool(d.get("cutmix_beta", False)),
            )
        except KeyError as err:
            raise RecipeError(f"recipe dict missing key {err}") from None


DEFAULT_RECIPE = MixRecipe(candidates=METHODS, weights=(1.0, 1.0, 1.0, 1.0), alpha=1.0)


@dataclass
class MixedBatch:
    """Mixed pairs plus everything needed to replay them bit-exactly."""

    results: list[MixResult]
    pairing: np.ndarray
    chosen_method: Union[str, tuple[str, ...]]
    seed: int
    recipe: MixRecipe
    per_pair_selection: bool = False
    lam_per_batch: bool = False

    def methods(self) -> tuple[str, ...]:
        if isinstance(self.chosen_method, str):
            return (self.chosen_method,) * len(self.results)
        return self.chosen_method


def pair_batch(batch: Sequence[Sample], rng: RngState):
    """Pair sample i with sample perm[i]; fixed points self-pair.

    Returns ``(pairs, perm)``.
    """
    n = len(batch)
    if n == 0:
        raise ValueError("batch must be non-empty")
    perm = rand_perm(rng, n)
    pairs = [(batch[i], batch[int(perm[i])]) for i in range(n)]
    return pairs, perm


def select_mixer(recipe: MixRecipe, rng: RngState) -> str:
    """Pick one candidate with probability weight / sum(weights)."""
    recipe.validate()
    return recipe.candidates[rand_choice_weighted(rng, recipe.weights)]


def _check_homogeneous(batch: Sequence[Sample]):
    shape = batch[0].x.shape
    classes = batch[0].y.size
    for s in batch[1:]:
        if s.x.shape != shape:
            raise ValueError(f"heterogeneous tensor shapes in batch: {shape} vs {s.x.shape}")
        if s.y.size != classes:
            raise ValueError(f"heterogeneous label lengths in batch: {classes} vs {s.y.size}")


def mix_batch(batch: Sequence[Sample], recipe: MixRecipe, rng: RngState, *,
              per_pair_selection: bool = False, lam_per_batch: bool = False,
              lam_override: Optional[float] = None,
              threads: Optional[int] = None) -> MixedBatch:
    """Mix a whole batch under one recipe.

    Master-stream draw order: permutation, method choice(s), lambda
    target(s), then one child stream split per pair for mask placement
    noise.  ``threads`` only parallelizes the per-pair mixer applications;
    results are identical for any worker count.  ``lam_override`` forces
    every pair's lambda target (calibration/testing hook).
    """
    recipe.validate()
    n = len(batch)
    if n == 0:
        raise ValueError("batch must be non-empty")
    _check_homogeneous(batch)
    cfg = recipe.mixer_config()

    pairs, perm = pair_batch(batch, rng)
    if per_pair_selection:
        methods = tuple(select_mixer(recipe, rng) for _ in range(n))
        chosen: Union[str, tuple[str, ...]] = methods
    else:
        one = select_mixer(recipe, rng)
        methods = (one,) * n
        chosen = one

    if lam_override is not None:
        lams = [float(lam_override)] * n
    elif lam_per_batch:
        shared: dict[str, float] = {}
        for m in methods:
            if m not in shared:
                shared[m] = draw_lam_target(m, rng, cfg)
        lams = [shared[m] for m in methods]
    else:
        lams = [draw_lam_target(m, rng, cfg) for m in methods]

    subs = rng.split(n)

    def run(i: int) -> MixResult:
        a, b = pairs[i]
        return apply_mixer(methods[i], a, b, subs[i], cfg, lam=lams[i])

    workers = 1 if threads is None else max(int(threads), 1)
    if workers > 1 and n > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(n)))
    else:
        results = [run(i) for i in range(n)]

    return MixedBatch(
        results=results,
        pairing=perm,
        chosen_method=chosen,
        seed=rng.seed,
        recipe=recipe,
        per_pair_selection=per_pair_selection,
        lam_per_batch=lam_per_batch,
    )
