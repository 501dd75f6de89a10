"""Dataset I/O: images, polygon ground-truth XML, mask rasterization, occupancy stats.

Annotation schema::

    <annotation>
      <filename>...</filename>
      <size width="..." height="..."/>
      <object>
        <name>road</name>
        <user>u1</user>
        <polygon><pt x="..." y="..."/>...</polygon>
        ...
      </object>
      ...
    </annotation>

Objects carry one polygon per blob; a label may appear under several
users.  Images pair with annotations by filename stem:
``images/<stem>.(png|ppm)`` next to ``annotations/<stem>.xml``.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import AnnotationError

KNOWN_TAGS = {"annotation", "filename", "size", "object", "name", "user", "polygon", "pt"}


@dataclass
class PolygonPath:
    vertices: np.ndarray  # (V, 2) float, pixel coordinates

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float)
        if self.vertices.ndim != 2 or self.vertices.shape[1] != 2 or self.vertices.shape[0] < 3:
            raise AnnotationError("polygon needs at least 3 (x, y) vertices")


@dataclass
class LabeledObject:
    name: str
    user: str
    polygons: list[PolygonPath]


@dataclass
class AnnotationDocument:
    filename: str
    width: int
    height: int
    objects: list[LabeledObject] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def users(self) -> list[str]:
        seen = dict.fromkeys(obj.user for obj in self.objects)
        return list(seen)


def parse_annotation(data: bytes | str) -> AnnotationDocument:
    """Parse annotation XML; unknown elements are skipped and reported in ``warnings``."""
    if isinstance(data, str):
        data = data.encode()
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise AnnotationError(f"malformed XML: {exc}") from exc
    if root.tag != "annotation":
        raise AnnotationError(f"expected <annotation> root, got <{root.tag}>")

    warnings: list[str] = []

    filename = root.findtext("filename")
    if not filename:
        raise AnnotationError("missing <filename>")
    size = root.find("size")
    if size is None or "width" not in size.attrib or "height" not in size.attrib:
        raise AnnotationError("missing <size width height>")
    width, height = int(size.attrib["width"]), int(size.attrib["height"])
    if width <= 0 or height <= 0:
        raise AnnotationError(f"non-positive image size {width}x{height}")

    objects: list[LabeledObject] = []
    for child in root:
        if child.tag in ("filename", "size"):
            continue
        if child.tag != "object":
            warnings.append(f"ignored unknown element <{child.tag}>")
            continue
        name = child.findtext("name") or ""
        user = child.findtext("user") or ""
        if not name:
            raise AnnotationError(f"object {len(objects)} is missing <name>")
        polygons: list[PolygonPath] = []
        for sub in child:
            if sub.tag in ("name", "user"):
                continue
            if sub.tag != "polygon":
                warnings.append(f"ignored unknown element <{sub.tag}> in object {name!r}")
                continue
            points = []
            for pt in sub:
                if pt.tag != "pt":
                    warnings.append(f"ignored unknown element <{pt.tag}> in polygon")
                    continue
                try:
                    points.append((float(pt.attrib["x"]), float(pt.attrib["y"])))
                except (KeyError, ValueError) as exc:
                    raise AnnotationError(f"bad <pt> in object {name!r}: {exc}") from exc
            if len(points) < 3:
                raise AnnotationError(
                    f"polygon {len(polygons)} of object {name!r} has {len(points)} < 3 vertices"
                )
            polygons.append(PolygonPath(np.array(points)))
        if not polygons:
            raise AnnotationError(f"object {name!r} has no polygons")
        objects.append(LabeledObject(name=name, user=user, polygons=polygons))

    return AnnotationDocument(
        filename=filename, width=width, height=height, objects=objects, warnings=warnings
    )


def _fmt(v: float) -> str:
    # repr keeps sub-pixel precision exactly and round-trips through float()
    return repr(float(v))


def write_annotation(doc: AnnotationDocument) -> bytes:
    """Canonical, deterministic serialization (stable order, fixed formatting)."""
    if doc.width <= 0 or doc.height <= 0 or not doc.filename:
        raise AnnotationError("document invariants violated (size/filename)")
    lines = ["<annotation>"]
    lines.append(f"  <filename>{doc.filename}</filename>")
    lines.append(f'  <size width="{doc.width}" height="{doc.height}"/>')
    for obj in doc.objects:
        if not obj.polygons:
            raise AnnotationError(f"object {obj.name!r} has no polygons")
        lines.append("  <object>")
        lines.append(f"    <name>{obj.name}</name>")
        lines.append(f"    <user>{obj.user}</user>")
        for poly in obj.polygons:
            if poly.vertices.shape[0] < 3:
                raise AnnotationError(f"polygon in object {obj.name!r} has < 3 vertices")
            lines.append("    <polygon>")
            for x, y in poly.vertices:
                lines.append(f'      <pt x="{_fmt(x)}" y="{_fmt(y)}"/>')
            lines.append("    </polygon>")
        lines.append("  </object>")
    lines.append("</annotation>")
    return ("\n".join(lines) + "\n").encode()


def _polygon_mask(vertices: np.ndarray, width: int, height: int) -> np.ndarray:
    """Even-odd rule sampled at pixel centers (x+0.5, y+0.5)."""
    mask = np.zeros((height, width), dtype=bool)
    xs = vertices[:, 0]
    ys = vertices[:, 1]
    x0 = max(int(np.floor(xs.min() - 0.5)), 0)
    x1 = min(int(np.ceil(xs.max() + 0.5)), width)
    y0 = max(int(np.floor(ys.min() - 0.5)), 0)
    y1 = min(int(np.ceil(ys.max() + 0.5)), height)
    if x0 >= x1 or y0 >= y1:
        return mask
    px = np.arange(x0, x1) + 0.5
    py = np.arange(y0, y1) + 0.5
    PX, PY = np.meshgrid(px, py)
    inside = np.zeros(PX.shape, dtype=bool)
    n = vertices.shape[0]
    for i in range(n):
        xa, ya = vertices[i]
        xb, yb = vertices[(i + 1) % n]
        crosses = (ya > PY) != (yb > PY)
        if not crosses.any():
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            x_at = (xb - xa) * (PY - ya) / (yb - ya) + xa
        inside ^= crosses & (PX < x_at)
    mask[y0:y1, x0:x1] = inside
    return mask


def rasterize(
    doc: AnnotationDocument,
    label: str,
    users: list[str] | None = None,
) -> np.ndarray:
    """Union mask of all polygons of objects named ``label``.

    ``users`` restricts to the given annotator ids; None takes all users.
    """
    mask = np.zeros((doc.height, doc.width), dtype=bool)
    for obj in doc.objects:
        if obj.name != label:
            continue
        if users is not None and obj.user not in users:
            continue
        for poly in obj.polygons:
            mask |= _polygon_mask(poly.vertices, doc.width, doc.height)
    return mask


def occupancy_histogram(masks: list[np.ndarray], bin_width: float = 0.05):
    """Distribution of per-image road-area fraction.

    Returns (edges, counts): edges has len(counts)+1; bins are
    [k*w, (k+1)*w) with the last bin closed at 1.
    """
    if not masks:
        raise AnnotationError("need at least one mask")
    n_bins = int(np.ceil(1.0 / bin_width))
    counts = np.zeros(n_bins, dtype=int)
    for mask in masks:
        mask = np.asarray(mask, dtype=bool)
        frac = mask.sum() / mask.size
        counts[min(int(frac / bin_width), n_bins - 1)] += 1
    edges = np.arange(n_bins + 1) * bin_width
    edges[-1] = 1.0
    return edges, counts


def load_image(path) -> np.ndarray:
    """Decode an 8-bit RGB PNG or PPM into an H x W x 3 float array in [0,1]."""
    with Image.open(path) as img:
        rgb = img.convert("RGB")
        return np.asarray(rgb, dtype=float) / 255.0


IMAGE_SUFFIXES = (".png", ".ppm")


def dataset_pairs(root) -> list[tuple[Path, Path]]:
    """(image, annotation) pairs under ``root``/images and ``root``/annotations, by stem."""
    root = Path(root)
    images_dir = root / "images"
    ann_dir = root / "annotations"
    pairs = []
    if not images_dir.is_dir():
        return pairs
    for img in sorted(images_dir.iterdir()):
        if img.suffix.lower() not in IMAGE_SUFFIXES:
            continue
        ann = ann_dir / f"{img.stem}.xml"
        if ann.is_file():
            pairs.append((img, ann))
    return pairs
