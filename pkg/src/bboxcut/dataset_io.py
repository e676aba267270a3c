"""Dataset ingestion and emission: COCO JSON or CSV annotations plus image files."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence

import numpy as np
from PIL import Image

from .augment import AnnotatedImage, AugmentationOutcome
from .geometry import BoundingBox, clip_box

log = logging.getLogger(__name__)


class DatasetError(Exception):
    """Raised for malformed annotations, missing files, or dimension mismatches."""


@dataclass(frozen=True)
class ImageEntry:
    image_id: str
    file_name: str  # relative to the image root
    width: int
    height: int
    coco_id: Optional[int] = None


@dataclass(frozen=True)
class AnnotationEntry:
    image_id: str
    box: BoundingBox
    annotation_id: Optional[int] = None
    category_id: Optional[int] = None


@dataclass
class DatasetManifest:
    images: List[ImageEntry]
    annotations: List[AnnotationEntry]
    categories: list  # passed through opaquely
    image_root: Path
    dropped_boxes: int = 0
    _by_image: Dict[str, List[AnnotationEntry]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._by_image:
            for ann in self.annotations:
                self._by_image.setdefault(ann.image_id, []).append(ann)

    def boxes_for(self, image_id: str) -> List[BoundingBox]:
        return [a.box for a in self._by_image.get(image_id, [])]

    def image_path(self, entry: ImageEntry) -> Path:
        return self.image_root / entry.file_name


def load_image_pixels(manifest: DatasetManifest, entry: ImageEntry) -> np.ndarray:
    path = manifest.image_path(entry)
    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


def annotated_image(manifest: DatasetManifest, entry: ImageEntry) -> AnnotatedImage:
    return AnnotatedImage(
        image_id=entry.image_id,
        pixels=load_image_pixels(manifest, entry),
        boxes=tuple(manifest.boxes_for(entry.image_id)),
    )


def iter_annotated(manifest: DatasetManifest) -> Iterator[AnnotatedImage]:
    for entry in manifest.images:
        yield annotated_image(manifest, entry)


def _image_size(path: Path) -> tuple:
    if not path.is_file():
        raise DatasetError(f"image file not found: {path}")
    try:
        with Image.open(path) as im:
            return im.size  # (width, height)
    except Exception as exc:
        raise DatasetError(f"cannot decode image {path}: {exc}") from exc


def _clip_or_drop(image_id, x, y, w, h, width, height, dropped):
    box = clip_box(x, y, w, h, width, height)
    if box is None:
        log.warning(
            "dropping degenerate box on image %s: original (x=%s, y=%s, w=%s, h=%s)",
            image_id, x, y, w, h,
        )
        dropped.append(1)
    return box


def _load_coco(annotation_path: Path, image_root: Path) -> DatasetManifest:
    try:
        data = json.loads(annotation_path.read_text())
    except json.JSONDecodeError as exc:
        raise DatasetError(
            f"malformed JSON in {annotation_path} at byte offset {exc.pos}: {exc.msg}"
        ) from exc

    images: List[ImageEntry] = []
    sizes: Dict[str, tuple] = {}
    by_coco_id: Dict[int, str] = {}
    for rec in data.get("images", []):
        image_id = str(rec["id"]) if "id" in rec else rec["file_name"]
        path = image_root / rec["file_name"]
        width, height = _image_size(path)
        if "width" in rec and "height" in rec:
            if (rec["width"], rec["height"]) != (width, height):
                raise DatasetError(
                    f"dimension mismatch for image {rec['file_name']}: annotation says "
                    f"{rec['width']}x{rec['height']}, file is {width}x{height}"
                )
        images.append(
            ImageEntry(
                image_id=image_id,
                file_name=rec["file_name"],
                width=width,
                height=height,
                coco_id=rec.get("id"),
            )
        )
        sizes[image_id] = (width, height)
        if "id" in rec:
            by_coco_id[rec["id"]] = image_id

    dropped: list = []
    annotations: List[AnnotationEntry] = []
    for rec in data.get("annotations", []):
        if rec["image_id"] not in by_coco_id:
            raise DatasetError(f"annotation {rec.get('id')} references unknown image id {rec['image_id']}")
        image_id = by_coco_id[rec["image_id"]]
        width, height = sizes[image_id]
        x, y, w, h = rec["bbox"]
        box = _clip_or_drop(image_id, x, y, w, h, width, height, dropped)
        if box is None:
            continue
        annotations.append(
            AnnotationEntry(
                image_id=image_id,
                box=box,
                annotation_id=rec.get("id"),
                category_id=rec.get("category_id"),
            )
        )

    return DatasetManifest(
        images=images,
        annotations=annotations,
        categories=data.get("categories", []),
        image_root=image_root,
        dropped_boxes=len(dropped),
    )


def _load_csv(annotation_path: Path, image_root: Path) -> DatasetManifest:
    """CSV alternative: header row, then image_name,x,y,w,h per box."""
    rows = []
    with annotation_path.open(newline="") as f:
        reader = csv.DictReader(f)
        expected = {"image_name", "x", "y", "w", "h"}
        if reader.fieldnames is None or not expected.issubset(reader.fieldnames):
            raise DatasetError(
                f"CSV {annotation_path} must have header columns {sorted(expected)}, "
                f"got {reader.fieldnames}"
            )
        for rec in reader:
            rows.append(rec)

    images: List[ImageEntry] = []
    sizes: Dict[str, tuple] = {}
    seen: Dict[str, bool] = {}
    for rec in rows:
        name = rec["image_name"]
        if name not in seen:
            width, height = _image_size(image_root / name)
            images.append(ImageEntry(image_id=name, file_name=name, width=width, height=height))
            sizes[name] = (width, height)
            seen[name] = True

    dropped: list = []
    annotations: List[AnnotationEntry] = []
    for i, rec in enumerate(rows):
        name = rec["image_name"]
        width, height = sizes[name]
        box = _clip_or_drop(
            name, float(rec["x"]), float(rec["y"]), float(rec["w"]), float(rec["h"]),
            width, height, dropped,
        )
        if box is None:
            continue
        annotations.append(AnnotationEntry(image_id=name, box=box, annotation_id=i + 1, category_id=1))

    return DatasetManifest(
        images=images,
        annotations=annotations,
        categories=[{"id": 1, "name": "object"}],
        image_root=image_root,
        dropped_boxes=len(dropped),
    )


def load_dataset(annotation_path, image_root) -> DatasetManifest:
    """Load a COCO JSON (.json) or CSV (.csv) dataset and validate it.

    Boxes are clipped to image bounds; boxes degenerate after clipping are
    dropped with a warning.
    """
    annotation_path = Path(annotation_path)
    image_root = Path(image_root)
    if not annotation_path.is_file():
        raise DatasetError(f"annotation file not found: {annotation_path}")
    if annotation_path.suffix.lower() == ".csv":
        return _load_csv(annotation_path, image_root)
    return _load_coco(annotation_path, image_root)


def _png_name(file_name: str) -> str:
    return str(Path(file_name).with_suffix(".png"))


def output_rel_path(file_name: str) -> str:
    """Relative output path for an image: under images/, re-encoded as PNG.

    Idempotent so that re-writing an already-emitted dataset does not nest
    another images/ level.
    """
    rel = _png_name(file_name)
    return rel if rel.startswith("images/") else "images/" + rel


def save_png(image: np.ndarray, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(image, mode="RGB").save(path, format="PNG")


def manifest_to_coco(manifest: DatasetManifest, rewrite_png: bool = True) -> dict:
    """Serialize a manifest back to a COCO dict (file names rewritten to PNG)."""
    coco_ids = {e.image_id: (e.coco_id if e.coco_id is not None else i + 1)
                for i, e in enumerate(manifest.images)}
    return {
        "images": [
            {
                "id": coco_ids[e.image_id],
                "file_name": output_rel_path(e.file_name) if rewrite_png else e.file_name,
                "width": e.width,
                "height": e.height,
            }
            for e in manifest.images
        ],
        "annotations": [
            {
                "id": a.annotation_id if a.annotation_id is not None else i + 1,
                "image_id": coco_ids[a.image_id],
                "bbox": [a.box.x, a.box.y, a.box.w, a.box.h],
                "category_id": a.category_id if a.category_id is not None else 1,
                "area": a.box.area,
                "iscrowd": 0,
            }
            for i, a in enumerate(manifest.annotations)
        ],
        "categories": manifest.categories or [{"id": 1, "name": "object"}],
    }


def write_dataset(
    outcomes: Sequence[AugmentationOutcome],
    manifest: DatasetManifest,
    out_root,
) -> Path:
    """Write augmented images as PNG plus an annotation JSON under out_root.

    Annotations are structurally identical to the (clipped) input; only file
    paths are rewritten. Returns the path of the written annotation file.
    """
    out_root = Path(out_root)
    if len(outcomes) != len(manifest.images):
        raise DatasetError(
            f"{len(outcomes)} outcomes for {len(manifest.images)} manifest images"
        )
    for entry, outcome in zip(manifest.images, outcomes):
        save_png(outcome.image, out_root / output_rel_path(entry.file_name))
    ann_path = out_root / "annotations.json"
    ann_path.parent.mkdir(parents=True, exist_ok=True)
    ann_path.write_text(json.dumps(manifest_to_coco(manifest), indent=1))
    return ann_path
