"""Batch/offline command-line front end.

Subcommands: ``mix`` (augment a manifest of samples), ``validate`` (emit
the statistical self-checks) and ``occlude`` (occlusion robustness
inputs).  Every command is a pure function of its arguments and input
files; all diagnostics go to stderr, all data to files.

Exit codes: 0 success, 1 bad arguments or failed validation checks,
2 IO failure, 3 invalid recipe.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .dataio import (
    DataFormatError,
    load_manifest,
    load_sample,
    save_payload,
    write_metadata,
)
from .randomix import MixRecipe, RecipeError, mix_batch
from .rng import RngState
from .validate import (
    lam_distribution_report,
    make_occluded_set,
    method_frequency_report,
    statistical_checks,
    write_reports,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_RECIPE = 3

THREADS_ENV = "MIXFORGE_THREADS"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 by default; the contract wants 1.
    def error(self, message):
        raise _UsageError(message)


def parse_recipe(text: str) -> MixRecipe:
    """Parse ``candidates=<m,...>;weights=<r,...>;alpha=<r>[;fmix_decay=<r>]``.

    Keys may appear in any order; candidate names are case-insensitive.
    """
    fields: dict[str, str] = {}
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise RecipeError(f"malformed recipe field {part!r}")
        key, value = part.split("=", 1)
        key = key.strip().lower()
        if key in fields:
            raise RecipeError(f"duplicate recipe field {key!r}")
        fields[key] = value.strip()
    for required in ("candidates", "weights", "alpha"):
        if required not in fields:
            raise RecipeError(f"recipe is missing {required!r}")
    known = {"candidates", "weights", "alpha", "fmix_decay", "resizemix_interp", "cutmix_beta"}
    unknown = set(fields) - known
    if unknown:
        raise RecipeError(f"unknown recipe fields {sorted(unknown)}")
    candidates = tuple(c.strip().lower() for c in fields["candidates"].split(",") if c.strip())
    try:
        weights = tuple(float(w) for w in fields["weights"].split(","))
        alpha = float(fields["alpha"])
        fmix_decay = float(fields.get("fmix_decay", "3.0"))
    except ValueError as err:
        raise RecipeError(f"bad numeric value in recipe: {err}") from None
    cutmix_beta = fields.get("cutmix_beta", "false").lower() in ("1", "true", "yes")
    return MixRecipe(
        candidates=candidates,
        weights=weights,
        alpha=alpha,
        fmix_decay=fmix_decay,
        resizemix_interp=fields.get("resizemix_interp", "bilinear"),
        cutmix_beta=cutmix_beta,
    )


def format_recipe(recipe: MixRecipe) -> str:
    """Inverse of :func:`parse_recipe` for the flat grammar."""
    return (
        f"candidates={','.join(recipe.candidates)}"
        f";weights={','.join(repr(w) for w in recipe.weights)}"
        f";alpha={recipe.alpha!r}"
        f";fmix_decay={recipe.fmix_decay!r}"
    )


def _parse_shape(text: str) -> tuple[int, ...]:
    parts = text.lower().split("x")
    try:
        dims = tuple(int(p) for p in parts)
    except ValueError:
        raise _UsageError(f"bad --shape {text!r}; expected HxW or L") from None
    if len(dims) not in (1, 2) or any(d < 1 for d in dims):
        raise _UsageError(f"bad --shape {text!r}; expected HxW or L")
    return dims


def _seed_arg(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(int(raw), 1)
    except ValueError:
        return 1


def _build_parser() -> _Parser:
    parser = _Parser(prog="mixforge", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    mix = sub.add_parser("mix", help="mix batches from a manifest")
    mix.add_argument("--manifest", required=True)
    mix.add_argument("--out", required=True)
    mix.add_argument("--recipe", required=True)
    mix.add_argument("--seed", required=True, type=_seed_arg)
    mix.add_argument("--batch-size", required=True, type=int)
    mix.add_argument("--per-pair-selection", action="store_true",
                     help="pick a mixer per pair instead of per batch")
    mix.add_argument("--lam-per-batch", action="store_true",
                     help="share one lambda target across the batch")

    val = sub.add_parser("validate", help="run the statistical self-checks")
    val.add_argument("--recipe", required=True)
    val.add_argument("--shape", required=True, help="HxW for images, L for audio")
    val.add_argument("--trials", required=True, type=int)
    val.add_argument("--seed", required=True, type=_seed_arg)
    val.add_argument("--out", required=True)

    occ = sub.add_parser("occlude", help="write zero-block occluded copies")
    occ.add_argument("--manifest", required=True)
    occ.add_argument("--out", required=True)
    occ.add_argument("--fraction", required=True, type=float)
    occ.add_argument("--seed", required=True, type=_seed_arg)
    return parser


def _cmd_mix(args) -> int:
    recipe = parse_recipe(args.recipe)
    if args.batch_size < 1:
        raise _UsageError("--batch-size must be at least 1")
    manifest = load_manifest(args.manifest)
    samples = [
        load_sample(path, cls, manifest.num_classes, manifest.kind)
        for path, cls in manifest.entries
    ]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    master = RngState(args.seed)
    threads = _threads()
    suffix = ".png" if manifest.kind == "image" else ".f32"
    for b in range(0, len(samples), args.batch_size):
        chunk = samples[b : b + args.batch_size]
        index = b // args.batch_size
        batch_seed = master.child_seed()
        batch = mix_batch(
            chunk,
            recipe,
            RngState(batch_seed),
            per_pair_selection=args.per_pair_selection,
            lam_per_batch=args.lam_per_batch,
            threads=threads,
        )
        write_metadata(batch, out / f"batch_{index:05d}.json")
        for i, res in enumerate(batch.results):
            save_payload(res.x_mixed, out / f"batch_{index:05d}_pair_{i:05d}{suffix}",
                         manifest.kind)
    return EXIT_OK


def _cmd_validate(args) -> int:
    recipe = parse_recipe(args.recipe)
    shape = _parse_shape(args.shape)
    if args.trials < 1000:
        raise _UsageError("--trials must be at least 1000")
    rng = RngState(args.seed)
    lam_report = lam_distribution_report(recipe, shape, args.trials, rng)
    freq_report = method_frequency_report(recipe, args.trials, rng)
    write_reports(lam_report, freq_report, recipe, args.out)
    checks = statistical_checks(lam_report, freq_report, recipe)
    if not checks["all_pass"]:
        failed = sorted(k for k, ok in checks.items() if not ok and k != "all_pass")
        print(f"mixforge validate: checks failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def _cmd_occlude(args) -> int:
    if not 0.0 < args.fraction < 1.0:
        raise _UsageError("--fraction must lie strictly inside (0, 1)")
    manifest = load_manifest(args.manifest)
    make_occluded_set(manifest, args.fraction, RngState(args.seed), args.out)
    return EXIT_OK


_COMMANDS = {"mix": _cmd_mix, "validate": _cmd_validate, "occlude": _cmd_occlude}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(f"mixforge: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as err:
        print(f"mixforge: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except RecipeError as err:
        print(f"mixforge: invalid recipe: {err}", file=sys.stderr)
        return EXIT_RECIPE
    except (OSError, DataFormatError) as err:
        print(f"mixforge: io error: {err}", file=sys.stderr)
        return EXIT_IO
    except ValueError as err:
        print(f"mixforge: error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
