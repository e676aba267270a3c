"""Shared fixtures: synthetic datasets and independent test oracles."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from PIL import Image

from bboxcut.geometry import BoundingBox, iou


def random_box(rng: np.random.Generator, width: int, height: int,
               max_extent: int = 32) -> BoundingBox:
    w = int(rng.integers(1, min(max_extent, width) + 1))
    h = int(rng.integers(1, min(max_extent, height) + 1))
    x = int(rng.integers(0, width - w + 1))
    y = int(rng.integers(0, height - h + 1))
    return BoundingBox(x, y, w, h)


def iou_raster_oracle(a: BoundingBox, b: BoundingBox) -> float:
    """Pixel-rasterization IoU: count member pixels on an integer grid."""
    width = max(a.x2, b.x2)
    height = max(a.y2, b.y2)
    ga = np.zeros((height, width), dtype=bool)
    gb = np.zeros((height, width), dtype=bool)
    ga[a.y:a.y2, a.x:a.x2] = True
    gb[b.y:b.y2, b.x:b.x2] = True
    inter = int(np.logical_and(ga, gb).sum())
    union = int(np.logical_or(ga, gb).sum())
    return 0.0 if inter == 0 else inter / union


def non_overlapping_oracle(boxes, tau: float):
    """Brute-force O(n^2) pairwise filter."""
    keep = []
    for i in range(len(boxes)):
        if all(iou(boxes[i], boxes[j]) <= tau for j in range(len(boxes)) if j != i):
            keep.append(i)
    return keep


def make_coco_dataset(
    root: Path,
    n_images: int,
    size=(64, 64),
    boxes_per_image: int = 3,
    seed: int = 0,
    extra_bboxes=None,
) -> Path:
    """Write a synthetic COCO dataset (PNG images) under `root`.

    extra_bboxes, when given, is a list of raw [x, y, w, h] lists appended as
    annotations of image 1 (for clipping/drop tests). Returns the annotation
    file path; images live in root/"images".
    """
    rng = np.random.default_rng(seed)
    width, height = size
    img_dir = root / "images"
    img_dir.mkdir(parents=True, exist_ok=True)

    images, annotations = [], []
    ann_id = 1
    for i in range(1, n_images + 1):
        name = f"img_{i:05d}.png"
        pixels = rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8)
        Image.fromarray(pixels, mode="RGB").save(img_dir / name)
        images.append({"id": i, "file_name": name, "width": width, "height": height})
        for _ in range(boxes_per_image):
            b = random_box(rng, width, height)
            annotations.append(
                {"id": ann_id, "image_id": i, "bbox": [b.x, b.y, b.w, b.h], "category_id": 1}
            )
            ann_id += 1
    if extra_bboxes:
        for bbox in extra_bboxes:
            annotations.append({"id": ann_id, "image_id": 1, "bbox": bbox, "category_id": 1})
            ann_id += 1

    ann_path = root / "annotations.json"
    ann_path.write_text(
        json.dumps(
            {
                "images": images,
                "annotations": annotations,
                "categories": [{"id": 1, "name": "object"}],
            }
        )
    )
    return ann_path
