"""Benchmark grid: representations x classifiers x images, per-image online training.

Every classifier is retrained from each test image's own bottom ROI and
then scores that full image; per-image ROC curves are averaged per
(representation, classifier) cell.  Unsupported combinations (the
subspace descriptor on single channels) become absent cells rather than
errors.
"""

from __future__ import annotations

import hashlib
import logging
import pickle
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import color, occ
from .dataset import dataset_pairs, load_image, parse_annotation, rasterize
from .errors import RoadOccError, SingleClassError, UnsupportedRepresentationError
from .evaluation import RocCurve, average_roc, roc_curve
from .occ.base import ClassifierSpec, make_spec
from .sampling import (
    AUGMENTED,
    FULL_ROI,
    SUPERPIXEL_MEDIANS,
    RoiSpec,
    augment_noise,
    extract_roi,
    reduce_superpixels,
    unit_bounds,
)

log = logging.getLogger(__name__)

VERTICAL = "vertical"
POOLED = "pooled"


def default_classifiers() -> list[ClassifierSpec]:
    """The 17 benchmark instances."""
    specs = [
        make_spec("NN", "NN"),
        make_spec("Mb", "Mb64S", bins=64),
        make_spec("Mb", "Mb64SN", bins=64, training_source=AUGMENTED),
        make_spec("Mb", "Mb100S", bins=100),
        make_spec("Mb", "Mb100SN", bins=100, training_source=AUGMENTED),
        make_spec("G", "G"),
        make_spec("RG", "RG"),
        make_spec("MoG", "MoG2", n=2),
        make_spec("MoG", "MoG4", n=4),
        make_spec("MoG", "MoGopt", n="opt"),
        make_spec("SVD", "SVD"),
        make_spec("PCA", "PCA"),
        make_spec("MPM", "MPM"),
        make_spec("MST", "MST"),
        make_spec("dLP", "dLP"),
        make_spec("km", "km"),
        make_spec("kc", "kc"),
    ]
    return specs


def classifier_by_name(name: str) -> ClassifierSpec:
    for spec in default_classifiers():
        if spec.name == name:
            return spec
    raise RoadOccError(
        f"unknown classifier {name!r}; choose from "
        + ", ".join(s.name for s in default_classifiers())
    )


@dataclass
class BenchmarkConfig:
    dataset_root: Path
    outdir: Path
    representations: list[str] = field(default_factory=lambda: list(color.CANONICAL_NAMES))
    classifiers: list[ClassifierSpec] = field(default_factory=default_classifiers)
    roi: RoiSpec = field(default_factory=RoiSpec)
    seed: int = 0
    averaging: str = VERTICAL
    label: str = "road"
    user: str | None = None
    merge_users: bool = False
    write_maps: bool = False
    use_cache: bool = True


@dataclass
class GridCell:
    absent: bool = False
    reason: str = ""
    curve: RocCurve | None = None
    per_image_aucs: list[float] = field(default_factory=list)


@dataclass
class ResultGrid:
    representations: list[str]
    classifiers: list[str]
    cells: dict[tuple[str, str], GridCell]
    skipped: list[str] = field(default_factory=list)


def _task_seed(base_seed: int, img_idx: int, rep_idx: int, clf_idx: int) -> int:
    seq = np.random.SeedSequence([base_seed, img_idx, rep_idx, clf_idx])
    return int(seq.generate_state(1)[0])


def _cache_key(image_digest: str, rep: str, spec: ClassifierSpec, seed: int) -> str:
    payload = f"{image_digest}|{rep}|{spec}|{seed}".encode()
    return hashlib.sha256(payload).hexdigest()


def _select_users(doc, config: BenchmarkConfig) -> list[str] | None:
    if config.user is not None:
        return [config.user]
    if config.merge_users:
        return None
    users = doc.users()
    if len(users) > 1:
        raise RoadOccError(
            f"{doc.filename}: multiple annotators {users}; pass --user or --merge-users"
        )
    return None


def _training_rows(spec: ClassifierSpec, roi_full, medians, seed: int):
    if spec.training_source == FULL_ROI:
        return roi_full
    if spec.training_source == SUPERPIXEL_MEDIANS:
        return medians
    if spec.training_source == AUGMENTED:
        return augment_noise(roi_full, seed=seed)
    raise RoadOccError(f"unknown training source {spec.training_source!r}")


def write_pgm(path, values: np.ndarray) -> None:
    """8-bit binary PGM of a [0,1] likelihood map (L*255, rounded)."""
    data = np.rint(np.clip(values, 0.0, 1.0) * 255.0).astype(np.uint8)
    h, w = data.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode())
        fh.write(data.tobytes())


def run_benchmark(config: BenchmarkConfig) -> ResultGrid:
    pairs = dataset_pairs(config.dataset_root)
    if not pairs:
        raise RoadOccError(f"no image/annotation pairs under {config.dataset_root}")

    skipped: list[str] = []
    images = []  # (stem, rgb image, truth mask, digest)
    for img_path, ann_path in pairs:
        try:
            rgb = load_image(img_path)
            doc = parse_annotation(ann_path.read_bytes())
            users = _select_users(doc, config)
            truth = rasterize(doc, config.label, users)
            if not truth.any() or truth.all():
                raise SingleClassError("ground truth has a single class")
        except (RoadOccError, OSError) as exc:
            skipped.append(f"{img_path.name}: {exc}")
            log.warning("skipping %s: %s", img_path.name, exc)
            continue
        digest = hashlib.sha256(img_path.read_bytes()).hexdigest()
        images.append((img_path.stem, rgb, truth, digest))
    if not images:
        raise RoadOccError("every image was skipped; nothing to benchmark")

    cache_dir = Path(config.outdir) / "cache"
    if config.use_cache:
        cache_dir.mkdir(parents=True, exist_ok=True)
    maps_dir = Path(config.outdir) / "maps"
    if config.write_maps:
        maps_dir.mkdir(parents=True, exist_ok=True)

    clf_names = [spec.name for spec in config.classifiers]
    cells: dict[tuple[str, str], GridCell] = {}

    for rep_idx, rep_name in enumerate(config.representations):
        rep = color.get_representation(rep_name)
        bounds = unit_bounds(rep.dim)
        curves: dict[str, list[RocCurve]] = {n: [] for n in clf_names}
        pooled: dict[str, list[tuple[np.ndarray, np.ndarray]]] = {n: [] for n in clf_names}
        per_image_aucs: dict[str, list[float]] = {n: [] for n in clf_names}
        absent: dict[str, str] = {}

        for img_idx, (stem, rgb, truth, digest) in enumerate(images):
            feats = color.rescale_to_unit(color.extract(rgb, rep), rep)
            roi_full = extract_roi(feats, config.roi, bounds=bounds)
            medians = reduce_superpixels(roi_full)

            for clf_idx, spec in enumerate(config.classifiers):
                if spec.name in absent:
                    continue
                seed = _task_seed(config.seed, img_idx, rep_idx, clf_idx)
                try:
                    model = None
                    cache_path = None
                    if config.use_cache:
                        key = _cache_key(digest, rep_name, spec, seed)
                        cache_path = cache_dir / f"{key}.pkl"
                        if cache_path.is_file():
                            model = occ.load_model(cache_path)
                    if model is None:
                        training = _training_rows(spec, roi_full, medians, seed)
                        model = occ.fit(training, spec, seed=seed)
                        if cache_path is not None:
                            occ.save_model(model, cache_path)
                except UnsupportedRepresentationError as exc:
                    absent[spec.name] = str(exc)
                    continue
                likelihood = occ.score_image(model, feats)
                if config.write_maps:
                    write_pgm(maps_dir / f"{stem}_{rep_name}_{spec.name}.pgm", likelihood)
                if config.averaging == POOLED:
                    pooled[spec.name].append((likelihood.ravel(), truth.ravel()))
                curve = roc_curve(likelihood, truth)
                curves[spec.name].append(curve)
                per_image_aucs[spec.name].append(curve.auc)

        for clf_name in clf_names:
            if clf_name in absent:
                cells[(rep_name, clf_name)] = GridCell(absent=True, reason=absent[clf_name])
            elif config.averaging == POOLED:
                scores = np.concatenate([s for s, _ in pooled[clf_name]])
                labels = np.concatenate([t for _, t in pooled[clf_name]])
                cells[(rep_name, clf_name)] = GridCell(
                    curve=roc_curve(scores, labels),
                    per_image_aucs=per_image_aucs[clf_name],
                )
            else:
                cells[(rep_name, clf_name)] = GridCell(
                    curve=average_roc(curves[clf_name]),
                    per_image_aucs=per_image_aucs[clf_name],
                )

    return ResultGrid(
        representations=list(config.representations),
        classifiers=clf_names,
        cells=cells,
        skipped=skipped,
    )


def detect(
    image_path,
    rep_name: str,
    spec: ClassifierSpec,
    roi: RoiSpec = RoiSpec(),
    tau: float = 0.5,
    seed: int = 0,
):
    """Single-image pipeline: returns (likelihood map, binary mask)."""
    rgb = load_image(image_path)
    rep = color.get_representation(rep_name)
    feats = color.rescale_to_unit(color.extract(rgb, rep), rep)
    roi_full = extract_roi(feats, roi, bounds=unit_bounds(rep.dim))
    medians = reduce_superpixels(roi_full)
    training = _training_rows(spec, roi_full, medians, seed)
    model = occ.fit(training, spec, seed=seed)
    likelihood = occ.score_image(model, feats)
    return likelihood, occ.binarize(likelihood, tau)
