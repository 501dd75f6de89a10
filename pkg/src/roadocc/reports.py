"""Report emission: AUC tables, averaged ROC CSVs, and rendered figures."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .bench import ResultGrid
from .evaluation import export_curve_csv

# Keep savefig output byte-stable across runs.
_PNG_METADATA = {"Software": "roadocc"}


def _table_rows(grid: ResultGrid, value_fn) -> list[list[str]]:
    rows = [["classifier"] + grid.representations]
    for clf in grid.classifiers:
        row = [clf]
        for rep in grid.representations:
            cell = grid.cells[(rep, clf)]
            row.append("" if cell.absent else value_fn(cell))
        rows.append(row)
    return rows


def emit_reports(grid: ResultGrid, outdir) -> list[Path]:
    """Write the AUC tables, per-cell ROC curves and summary figures.

    Returns the list of written files.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    # AUC of the averaged curve, scaled x100 to mirror the benchmark tables.
    table = outdir / "auc_table.csv"
    with open(table, "w", newline="") as fh:
        csv.writer(fh).writerows(
            _table_rows(grid, lambda cell: f"{cell.curve.auc * 100.0:.1f}")
        )
    written.append(table)

    mean_table = outdir / "auc_table_mean_per_image.csv"
    with open(mean_table, "w", newline="") as fh:
        csv.writer(fh).writerows(
            _table_rows(
                grid,
                lambda cell: f"{np.mean(cell.per_image_aucs) * 100.0:.1f}",
            )
        )
    written.append(mean_table)

    roc_dir = outdir / "roc"
    roc_dir.mkdir(exist_ok=True)
    for rep in grid.representations:
        for clf in grid.classifiers:
            cell = grid.cells[(rep, clf)]
            if cell.absent:
                continue
            path = roc_dir / f"{rep}_{clf}.csv"
            export_curve_csv(cell.curve, path)
            written.append(path)

    written.extend(render_figures(grid, outdir / "figures"))

    if grid.skipped:
        skipped = outdir / "skipped.txt"
        skipped.write_text("".join(line + "\n" for line in grid.skipped))
        written.append(skipped)
    return written


def render_figures(grid: ResultGrid, figdir) -> list[Path]:
    """One ROC overlay per representation plus an AUC heatmap."""
    figdir = Path(figdir)
    figdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    for rep in grid.representations:
        fig, ax = plt.subplots(figsize=(6, 5))
        for clf in grid.classifiers:
            cell = grid.cells[(rep, clf)]
            if cell.absent:
                continue
            ax.plot(cell.curve.fpr, cell.curve.tpr, lw=1.0,
                    label=f"{clf} ({cell.curve.auc * 100:.1f})")
        ax.plot([0, 1], [0, 1], "k--", lw=0.5)
        ax.set_xlabel("false positive rate")
        ax.set_ylabel("true positive rate")
        ax.set_title(f"ROC curves: {rep}")
        ax.legend(fontsize=6, loc="lower right", ncol=2)
        path = figdir / f"roc_{rep}.png"
        fig.savefig(path, dpi=120, metadata=_PNG_METADATA)
        plt.close(fig)
        written.append(path)

    values = np.full((len(grid.classifiers), len(grid.representations)), np.nan)
    for i, clf in enumerate(grid.classifiers):
        for j, rep in enumerate(grid.representations):
            cell = grid.cells[(rep, clf)]
            if not cell.absent:
                values[i, j] = cell.curve.auc * 100.0
    fig, ax = plt.subplots(figsize=(1.2 + 0.5 * len(grid.representations),
                                    1.2 + 0.35 * len(grid.classifiers)))
    im = ax.imshow(values, aspect="auto", cmap="viridis")
    ax.set_xticks(range(len(grid.representations)), grid.representations,
                  rotation=45, ha="right", fontsize=7)
    ax.set_yticks(range(len(grid.classifiers)), grid.classifiers, fontsize=7)
    fig.colorbar(im, ax=ax, label="AUC x100")
    ax.set_title("AUC grid")
    fig.tight_layout()
    path = figdir / "auc_heatmap.png"
    fig.savefig(path, dpi=120, metadata=_PNG_METADATA)
    plt.close(fig)
    written.append(path)
    return written


def export_occupancy_csv(edges: np.ndarray, counts: np.ndarray, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin_lo", "bin_hi", "count"])
        for lo, hi, count in zip(edges[:-1], edges[1:], counts):
            writer.writerow([f"{lo:.9g}", f"{hi:.9g}", int(count)])


def render_occupancy_figure(edges: np.ndarray, counts: np.ndarray, path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(edges[:-1], counts, width=np.diff(edges), align="edge", edgecolor="k")
    ax.set_xlabel("road occupancy fraction")
    ax.set_ylabel("images")
    ax.set_title("Dataset road-occupancy distribution")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_PNG_METADATA)
    plt.close(fig)
