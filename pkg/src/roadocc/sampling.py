"""Training-sample collection: bottom-of-image ROI, superpixel medians, noise augmentation.

The detector is trained online from the assumption that a fixed rectangle
at the bottom of the image is road.  The full ROI yields 201*66 = 13266
feature rows; a 15x6 rectangular grid of per-cell medians reduces that to
90 rows for the methods that cannot afford the full set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DimensionError

FULL_ROI = "full_roi"
SUPERPIXEL_MEDIANS = "superpixel_medians"
AUGMENTED = "augmented"

DEFAULT_NOISE_SIGMA = 30.0 / 256.0


@dataclass(frozen=True)
class RoiSpec:
    """Bottom-of-image training rectangle (defaults give 13266 pixels)."""

    width: int = 201
    height: int = 66
    horizontal_anchor: float = 0.5
    bottom_margin: int = 0


@dataclass
class SampleSet:
    """N x d matrix of training feature rows plus provenance.

    ``bounds`` holds per-channel (lo, hi) clamp limits, shape (d, 2); the
    benchmark works in rescaled coordinates so this is normally [0,1].
    ``shape`` is the (height, width) layout of the rows for ROI sources.
    """

    rows: np.ndarray
    source: str
    seed: int = 0
    bounds: np.ndarray | None = None
    shape: tuple[int, int] | None = field(default=None)

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=float)
        if self.rows.ndim != 2 or self.rows.shape[0] == 0:
            raise ConfigurationError("SampleSet rows must be a non-empty N x d matrix")
        if not np.all(np.isfinite(self.rows)):
            raise ConfigurationError("SampleSet rows must be finite")

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def dim(self) -> int:
        return self.rows.shape[1]


def roi_bounds(image_shape: tuple[int, int], spec: RoiSpec) -> tuple[int, int, int, int]:
    """(row0, row1, col0, col1) of the ROI; raises DimensionError if it does not fit."""
    height, width = image_shape
    if spec.width > width:
        raise DimensionError(
            f"ROI width {spec.width} exceeds image width {width}"
        )
    row1 = height - spec.bottom_margin
    row0 = row1 - spec.height
    if row0 < 0 or row1 > height:
        raise DimensionError(
            f"ROI height {spec.height} (+margin {spec.bottom_margin}) exceeds image height {height}"
        )
    center = spec.horizontal_anchor * width
    col0 = int(round(center - spec.width / 2.0))
    col0 = max(0, min(col0, width - spec.width))
    return row0, row1, col0, col0 + spec.width


def extract_roi(
    features: np.ndarray,
    spec: RoiSpec = RoiSpec(),
    bounds: np.ndarray | None = None,
) -> SampleSet:
    """Collect one feature row per ROI pixel, row-major, from an H x W x d feature image."""
    features = np.asarray(features, dtype=float)
    if features.ndim != 3:
        raise DimensionError(f"expected an HxWxd feature image, got shape {features.shape}")
    row0, row1, col0, col1 = roi_bounds(features.shape[:2], spec)
    block = features[row0:row1, col0:col1, :]
    rows = block.reshape(-1, features.shape[2])
    return SampleSet(
        rows,
        source=FULL_ROI,
        bounds=bounds,
        shape=(spec.height, spec.width),
    )


def reduce_superpixels(roi: SampleSet, grid: tuple[int, int] = (15, 6)) -> SampleSet:
    """Replace the ROI by per-channel medians over a cols x rows rectangular grid.

    With the default 15x6 grid over the 201x66 ROI this yields 90 rows.
    """
    if roi.source != FULL_ROI:
        raise ConfigurationError("reduce_superpixels expects a full-ROI sample set")
    if roi.shape is None:
        raise ConfigurationError("ROI sample set is missing its spatial shape")
    cols, rows_n = grid
    height, width = roi.shape
    if cols < 1 or rows_n < 1 or cols > width or rows_n > height:
        raise ConfigurationError(
            f"grid {grid} leaves empty cells on a {width}x{height} ROI"
        )
    block = roi.rows.reshape(height, width, roi.dim)
    col_edges = np.linspace(0, width, cols + 1).astype(int)
    row_edges = np.linspace(0, height, rows_n + 1).astype(int)
    medians = np.empty((rows_n * cols, roi.dim))
    idx = 0
    for r in range(rows_n):
        for c in range(cols):
            cell = block[row_edges[r] : row_edges[r + 1], col_edges[c] : col_edges[c + 1], :]
            medians[idx] = np.median(cell.reshape(-1, roi.dim), axis=0)
            idx += 1
    return SampleSet(medians, source=SUPERPIXEL_MEDIANS, bounds=roi.bounds, shape=None)


def augment_noise(
    samples: SampleSet,
    sigma: float = DEFAULT_NOISE_SIGMA,
    seed: int = 0,
) -> SampleSet:
    """Duplicate the sample set and add clamped Gaussian noise to the second half."""
    if sigma < 0:
        raise ConfigurationError("noise sigma must be non-negative")
    rng = np.random.default_rng(seed)
    noisy = samples.rows + rng.normal(0.0, sigma, size=samples.rows.shape) if sigma > 0 else samples.rows.copy()
    if samples.bounds is not None:
        lo = samples.bounds[:, 0]
        hi = samples.bounds[:, 1]
        noisy = np.clip(noisy, lo, hi)
    rows = np.vstack([samples.rows, noisy])
    return SampleSet(rows, source=AUGMENTED, seed=seed, bounds=samples.bounds, shape=None)


def unit_bounds(dim: int) -> np.ndarray:
    """Per-channel [0,1] clamp limits for rescaled feature spaces."""
    return np.tile(np.array([0.0, 1.0]), (dim, 1))
