#!/usr/bin/env python3
"""Generate the committed 5-image synthetic benchmark fixture.

Each image is a 210x100 road scene: a trapezoidal road region at the
bottom with its own color and texture, background sky/vegetation bands on
top.  Annotations are written in the canonical XML schema.  Deterministic
(fixed seed); rerunning reproduces the same bytes.
"""

from pathlib import Path

import numpy as np
from PIL import Image

import sys

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from roadocc.dataset import AnnotationDocument, LabeledObject, PolygonPath, write_annotation

WIDTH, HEIGHT = 210, 100
ROAD_TOP = 30  # ROI occupies rows 34..99, safely inside the road region

SCENES = [
    # (road rgb, background rgb, noise scale)
    ((0.42, 0.42, 0.46), (0.35, 0.62, 0.30), 0.02),
    ((0.55, 0.53, 0.50), (0.55, 0.70, 0.90), 0.03),
    ((0.30, 0.30, 0.34), (0.70, 0.65, 0.45), 0.02),
    ((0.48, 0.46, 0.52), (0.25, 0.45, 0.25), 0.04),
    ((0.60, 0.58, 0.55), (0.80, 0.80, 0.85), 0.02),
]


def make_image(road_rgb, bg_rgb, noise, rng):
    img = np.empty((HEIGHT, WIDTH, 3))
    img[:] = bg_rgb
    img[ROAD_TOP:, :, :] = road_rgb
    # mild vertical shading + texture
    shade = np.linspace(0.95, 1.05, HEIGHT)[:, None, None]
    img = img * shade + rng.normal(0.0, noise, img.shape)
    return np.clip(img, 0.0, 1.0)


def main():
    root = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "dataset"
    (root / "images").mkdir(parents=True, exist_ok=True)
    (root / "annotations").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20240915)
    for i, (road_rgb, bg_rgb, noise) in enumerate(SCENES):
        stem = f"scene{i:02d}"
        img = make_image(road_rgb, bg_rgb, noise, rng)
        data = np.rint(img * 255).astype(np.uint8)
        Image.fromarray(data).save(root / "images" / f"{stem}.png")
        road = PolygonPath(
            np.array(
                [
                    [0.0, ROAD_TOP],
                    [WIDTH, ROAD_TOP],
                    [WIDTH, HEIGHT],
                    [0.0, HEIGHT],
                ]
            )
        )
        doc = AnnotationDocument(
            filename=f"{stem}.png",
            width=WIDTH,
            height=HEIGHT,
            objects=[LabeledObject(name="road", user="expert", polygons=[road])],
        )
        (root / "annotations" / f"{stem}.xml").write_bytes(write_annotation(doc))
    print(f"fixture written under {root}")


if __name__ == "__main__":
    main()
