"""Benchmark command-line interface.

Subcommands: ``bench`` (full grid), ``detect`` (one image), ``occupancy``
(dataset stats), ``validate-annotations`` (schema check).  Every flag can
also come from a line-oriented ``key = value`` config file via --config;
explicit flags win.

Exit codes: 0 success, 1 fatal configuration/data error, 2 partial skips.
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path

import click
import numpy as np

from . import color
from .bench import (
    BenchmarkConfig,
    classifier_by_name,
    detect as run_detect,
    run_benchmark,
    write_pgm,
)
from .dataset import dataset_pairs, occupancy_histogram, parse_annotation, rasterize
from .errors import RoadOccError
from .reports import emit_reports, export_occupancy_csv, render_occupancy_figure
from .sampling import RoiSpec

log = logging.getLogger("roadocc")


def load_config_file(path) -> dict[str, str]:
    """Parse ``key = value`` lines; '#' starts a comment, blank lines ignored."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise RoadOccError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _merge_config(ctx: click.Context, config_path: str | None) -> dict[str, str]:
    if not config_path:
        return {}
    file_values = load_config_file(config_path)
    # Flags given on the command line override the file.
    merged = {}
    for key, value in file_values.items():
        param = key.replace("-", "_")
        source = ctx.get_parameter_source(param)
        if source is None or source == click.core.ParameterSource.DEFAULT:
            merged[param] = value
    return merged


@click.group()
def main() -> None:
    """Online road detection by one-class color classification."""
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")


def _parse_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    return str(value).lower() in ("1", "true", "yes", "on")


@main.command()
@click.option("--dataset", required=False, type=click.Path(), help="Dataset root (images/ + annotations/).")
@click.option("--out", required=False, type=click.Path(), help="Output directory.")
@click.option("--reps", default=None, help="Comma-separated representation names (default: all 19).")
@click.option("--classifiers", default=None, help="Comma-separated classifier names (default: all 17).")
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--tau", default=0.5, type=float, show_default=True, help="Threshold recorded in the config echo.")
@click.option("--averaging", default="vertical", type=click.Choice(["vertical", "pooled"]), show_default=True)
@click.option("--label", default="road", show_default=True)
@click.option("--user", default=None, help="Ground-truth annotator id.")
@click.option("--merge-users", is_flag=True, help="Union polygons across annotators.")
@click.option("--maps", "write_maps", is_flag=True, help="Write per-image likelihood maps (PGM).")
@click.option("--no-cache", is_flag=True, help="Disable the model cache.")
@click.option("--config", "config_path", default=None, type=click.Path(exists=True), help="key = value config file.")
@click.pass_context
def bench(ctx, dataset, out, reps, classifiers, seed, tau, averaging, label,
          user, merge_users, write_maps, no_cache, config_path):
    """Run the full (representation x classifier) benchmark grid."""
    overrides = _merge_config(ctx, config_path)
    dataset = overrides.get("dataset", dataset)
    out = overrides.get("out", out)
    reps = overrides.get("reps", reps)
    classifiers = overrides.get("classifiers", classifiers)
    seed = int(overrides.get("seed", seed))
    averaging = overrides.get("averaging", averaging)
    label = overrides.get("label", label)
    user = overrides.get("user", user)
    merge_users = _parse_bool(overrides.get("merge_users", merge_users))
    write_maps = _parse_bool(overrides.get("maps", write_maps))
    no_cache = _parse_bool(overrides.get("no_cache", no_cache))
    _ = float(overrides.get("tau", tau))

    if not dataset or not out:
        click.echo("error: --dataset and --out are required (flag or config file)", err=True)
        sys.exit(1)

    rep_names = [r.strip() for r in reps.split(",")] if reps else list(color.CANONICAL_NAMES)
    try:
        specs = (
            [classifier_by_name(c.strip()) for c in classifiers.split(",")]
            if classifiers
            else None
        )
        config = BenchmarkConfig(
            dataset_root=Path(dataset),
            outdir=Path(out),
            representations=rep_names,
            seed=seed,
            averaging=averaging,
            label=label,
            user=user,
            merge_users=merge_users,
            write_maps=write_maps,
            use_cache=not no_cache,
        )
        if specs is not None:
            config.classifiers = specs
        grid = run_benchmark(config)
        files = emit_reports(grid, out)
    except RoadOccError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(f"wrote {len(files)} files under {out}")
    if grid.skipped:
        click.echo(f"skipped {len(grid.skipped)} images (see skipped.txt)", err=True)
        sys.exit(2)


@main.command()
@click.option("--image", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--rep", default="HS", show_default=True)
@click.option("--classifier", "classifier_name", default="RG", show_default=True)
@click.option("--tau", default=0.5, type=float, show_default=True)
@click.option("--seed", default=0, type=int, show_default=True)
def detect(image, out, rep, classifier_name, tau, seed):
    """Score one image: likelihood map (PGM) plus a binary mask at --tau."""
    try:
        spec = classifier_by_name(classifier_name)
        likelihood, mask = run_detect(image, rep, spec, tau=tau, seed=seed)
    except RoadOccError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = Path(image).stem
    write_pgm(outdir / f"{stem}_likelihood.pgm", likelihood)
    write_pgm(outdir / f"{stem}_mask.pgm", mask.astype(float))
    click.echo(f"road fraction at tau={tau}: {mask.mean():.4f}")


@main.command()
@click.option("--dataset", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--label", default="road", show_default=True)
@click.option("--bin-width", default=0.05, type=float, show_default=True)
def occupancy(dataset, out, label, bin_width):
    """Road-occupancy distribution over the dataset (CSV + figure)."""
    pairs = dataset_pairs(dataset)
    if not pairs:
        click.echo(f"error: no image/annotation pairs under {dataset}", err=True)
        sys.exit(1)
    masks = []
    skipped = 0
    for _, ann_path in pairs:
        try:
            doc = parse_annotation(ann_path.read_bytes())
            masks.append(rasterize(doc, label))
        except RoadOccError as exc:
            log.warning("skipping %s: %s", ann_path.name, exc)
            skipped += 1
    if not masks:
        click.echo("error: no usable annotations", err=True)
        sys.exit(1)
    edges, counts = occupancy_histogram(masks, bin_width=bin_width)
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    export_occupancy_csv(edges, counts, outdir / "occupancy.csv")
    render_occupancy_figure(edges, counts, outdir / "occupancy.png")
    fractions = [float(np.mean(m)) for m in masks]
    click.echo(
        f"{len(masks)} images, mean occupancy {np.mean(fractions):.3f}, "
        f"median {np.median(fractions):.3f}"
    )
    if skipped:
        sys.exit(2)


@main.command("validate-annotations")
@click.option("--dataset", required=True, type=click.Path(exists=True))
def validate_annotations(dataset):
    """Schema-check every annotation XML under the dataset root."""
    root = Path(dataset)
    ann_dir = root / "annotations" if (root / "annotations").is_dir() else root
    files = sorted(ann_dir.glob("*.xml"))
    if not files:
        click.echo(f"error: no XML files under {ann_dir}", err=True)
        sys.exit(1)
    errors = 0
    warned = 0
    for path in files:
        try:
            doc = parse_annotation(path.read_bytes())
        except RoadOccError as exc:
            click.echo(f"FAIL {path.name}: {exc}")
            errors += 1
            continue
        if doc.warnings:
            warned += 1
            for warning in doc.warnings:
                click.echo(f"WARN {path.name}: {warning}")
        else:
            click.echo(f"OK   {path.name}")
    click.echo(f"{len(files)} files: {errors} invalid, {warned} with warnings")
    if errors:
        sys.exit(1)
    if warned:
        sys.exit(2)


if __name__ == "__main__":
    main()
