"""Command-line surface: `bboxcut augment`, `bboxcut preview`, `bboxcut stats`."""

from __future__ import annotations

import dataclasses
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

import click
import numpy as np
from PIL import Image, ImageDraw

from .augment import (
    AnnotatedImage,
    AugmentationConfig,
    AugmentationOutcome,
    augment_annotated,
)
from .baselines import CutoutConfig, RegionAwareREConfig
from .color import MaskColor
from .dataset_io import (
    DatasetError,
    DatasetManifest,
    load_dataset,
    manifest_to_coco,
    output_rel_path,
    save_png,
)
from .geometry import BoundingBox, iou, non_overlapping_boxes
from .metrics import build_report

log = logging.getLogger("bboxcut")

PREVIEW_LEGEND = {
    "selected_box": "red",
    "unselected_box": "yellow",
    "mask_region": "blue",
}


def _unit_interval(ctx, param, value):
    if value is not None and not 0.0 <= value <= 1.0:
        raise click.BadParameter(f"{param.opts[0]} must be in [0, 1], got {value}")
    return value


@dataclass(frozen=True)
class _Task:
    index: int
    image_id: str
    image_path: str
    boxes: Tuple[Tuple[int, int, int, int], ...]
    out_path: Optional[str]
    config: AugmentationConfig
    cutout: CutoutConfig
    erasing: RegionAwareREConfig


def _load_annotated(task: _Task) -> AnnotatedImage:
    with Image.open(task.image_path) as im:
        pixels = np.asarray(im.convert("RGB"), dtype=np.uint8)
    return AnnotatedImage(
        image_id=task.image_id,
        pixels=pixels,
        boxes=tuple(BoundingBox(*b) for b in task.boxes),
    )


def _process_image(task: _Task):
    """Worker body: load, augment, write PNG, return an image-free outcome."""
    try:
        annotated = _load_annotated(task)
        outcome = augment_annotated(annotated, task.config, task.cutout, task.erasing)
        if task.out_path is not None:
            save_png(outcome.image, Path(task.out_path))
        return task.index, dataclasses.replace(outcome, image=None), None
    except Exception as exc:  # noqa: BLE001 - reported per image
        return task.index, None, f"{task.image_id}: {exc}"


def _build_tasks(manifest: DatasetManifest, out_root: Optional[Path], config, cutout_cfg, erase_cfg):
    tasks = []
    for i, entry in enumerate(manifest.images):
        out_path = None
        if out_root is not None:
            out_path = str(out_root / output_rel_path(entry.file_name))
        tasks.append(
            _Task(
                index=i,
                image_id=entry.image_id,
                image_path=str(manifest.image_path(entry)),
                boxes=tuple((b.x, b.y, b.w, b.h) for b in manifest.boxes_for(entry.image_id)),
                out_path=out_path,
                config=config,
                cutout=cutout_cfg,
                erasing=erase_cfg,
            )
        )
    return tasks


def _run_tasks(tasks, workers: int):
    results: List = [None] * len(tasks)
    if workers <= 1:
        for task in tasks:
            results[task.index] = _process_image(task)[1:]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for index, outcome, err in pool.map(_process_image, tasks, chunksize=8):
                results[index] = (outcome, err)
    outcomes = [r[0] for r in results]
    errors = [r[1] for r in results if r[1] is not None]
    return outcomes, errors


def _config_options(fn):
    opts = [
        click.option("--p-aug", type=float, default=0.3, callback=_unit_interval,
                     show_default=True, help="Per-image augmentation probability."),
        click.option("--p-m", type=float, default=0.3, callback=_unit_interval,
                     show_default=True, help="Per-eligible-box masking probability."),
        click.option("--alpha-w", type=float, default=0.3, callback=_unit_interval,
                     show_default=True, help="Max mask width fraction of its box."),
        click.option("--alpha-h", type=float, default=0.3, callback=_unit_interval,
                     show_default=True, help="Max mask height fraction of its box."),
        click.option("--iou-thresh", type=float, default=0.5, callback=_unit_interval,
                     show_default=True, help="Pairwise IoU ceiling for eligible boxes."),
        click.option("--mask-color", type=click.Choice([m.value for m in MaskColor]),
                     default=MaskColor.GLOBAL_DOMINANT.value, show_default=True),
        click.option("--method", type=click.Choice(["bboxcut", "cutout",
                     "region_aware_random_erasing", "none"]),
                     default="bboxcut", show_default=True),
        click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True),
        click.option("--cutout-side", type=click.IntRange(min=1), default=None,
                     help="Cutout square side [default: shorter image dim / 8]."),
        click.option("--cutout-count", type=click.IntRange(min=1), default=1, show_default=True),
        click.option("--cutout-prob", type=float, default=0.3, callback=_unit_interval,
                     show_default=True),
        click.option("--erase-area-range", type=(float, float), default=(0.02, 0.2),
                     show_default=True),
        click.option("--erase-aspect-range", type=(float, float), default=(0.3, 3.33),
                     show_default=True),
        click.option("--erase-prob", type=float, default=0.3, callback=_unit_interval,
                     show_default=True),
        click.option("--erase-max-overlap", type=float, default=0.2, callback=_unit_interval,
                     show_default=True),
        click.option("--erase-attempts", type=click.IntRange(min=1), default=10, show_default=True),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _make_configs(kw) -> Tuple[AugmentationConfig, CutoutConfig, RegionAwareREConfig]:
    try:
        config = AugmentationConfig(
            p_aug=kw["p_aug"], p_m=kw["p_m"], alpha_w=kw["alpha_w"], alpha_h=kw["alpha_h"],
            iou_threshold=kw["iou_thresh"], mask_color=MaskColor(kw["mask_color"]),
            method=kw["method"], seed=kw["seed"],
        )
        cutout_cfg = CutoutConfig(
            side=kw["cutout_side"], count=kw["cutout_count"],
            apply_probability=kw["cutout_prob"],
        )
        erase_cfg = RegionAwareREConfig(
            area_range=kw["erase_area_range"], aspect_range=kw["erase_aspect_range"],
            apply_probability=kw["erase_prob"], max_box_overlap=kw["erase_max_overlap"],
            max_resample_attempts=kw["erase_attempts"],
        )
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    return config, cutout_cfg, erase_cfg


@click.group()
@click.option("-v", "--verbose", count=True, help="Increase log verbosity.")
def main(verbose):
    """Bounding-box-aware occlusion augmentation for detection datasets."""
    level = logging.WARNING - 10 * min(verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


@main.command("augment")
@click.option("--annotations", "annotation_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--images", "image_root", required=True,
              type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--out", "out_root", required=True, type=click.Path(path_type=Path))
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True,
              envvar="BBOXCUT_WORKERS")
@_config_options
def cmd_augment(annotation_path, image_root, out_root, workers, **kw):
    """Augment a dataset, writing images/, annotations.json, and report.json."""
    config, cutout_cfg, erase_cfg = _make_configs(kw)
    try:
        manifest = load_dataset(annotation_path, image_root)
    except DatasetError as exc:
        raise click.ClickException(str(exc)) from exc

    tasks = _build_tasks(manifest, out_root, config, cutout_cfg, erase_cfg)
    outcomes, errors = _run_tasks(tasks, workers)

    out_root.mkdir(parents=True, exist_ok=True)
    (out_root / "annotations.json").write_text(json.dumps(manifest_to_coco(manifest), indent=1))
    report = build_report(outcomes, manifest, config)
    report.write(out_root / "report.json")

    for err in errors:
        click.echo(f"error: {err}", err=True)
    click.echo(
        f"augmented {report.aggregate.image_count} images "
        f"({report.aggregate.augmented_fraction:.3f} augmented fraction, "
        f"{len(errors)} failed)"
    )
    if errors:
        sys.exit(1)


def _draw_overlay(outcome: AugmentationOutcome, boxes) -> Image.Image:
    im = Image.fromarray(outcome.image, mode="RGB")
    draw = ImageDraw.Draw(im)
    selected = {p.region.parent_index for p in outcome.placements if p.region.parent_index >= 0}
    for i, b in enumerate(boxes):
        color = PREVIEW_LEGEND["selected_box"] if i in selected else PREVIEW_LEGEND["unselected_box"]
        draw.rectangle([b.x, b.y, b.x2 - 1, b.y2 - 1], outline=color)
    for p in outcome.placements:
        r = p.region
        draw.rectangle([r.x, r.y, r.x2 - 1, r.y2 - 1], outline=PREVIEW_LEGEND["mask_region"])
    return im


@main.command("preview")
@click.option("--annotations", "annotation_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--images", "image_root", required=True,
              type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--out", "out_root", required=True, type=click.Path(path_type=Path))
@click.option("--samples", "sample_count", type=click.IntRange(min=1), default=8,
              show_default=True, help="Number of images to render.")
@_config_options
def cmd_preview(annotation_path, image_root, out_root, sample_count, **kw):
    """Render augmented samples with color-coded box and mask outlines."""
    config, cutout_cfg, erase_cfg = _make_configs(kw)
    try:
        manifest = load_dataset(annotation_path, image_root)
    except DatasetError as exc:
        raise click.ClickException(str(exc)) from exc

    picker = np.random.default_rng(config.seed)
    n = min(sample_count, len(manifest.images))
    indices = sorted(picker.choice(len(manifest.images), size=n, replace=False).tolist())

    preview_dir = out_root / "previews"
    preview_dir.mkdir(parents=True, exist_ok=True)
    summary = []
    tasks = _build_tasks(manifest, None, config, cutout_cfg, erase_cfg)
    for i in indices:
        annotated = _load_annotated(tasks[i])
        outcome = augment_annotated(annotated, config, cutout_cfg, erase_cfg)
        overlay = _draw_overlay(outcome, annotated.boxes)
        name = Path(manifest.images[i].file_name).stem + "_preview.png"
        overlay.save(preview_dir / name, format="PNG")
        summary.append(
            {
                "image_id": annotated.image_id,
                "file": name,
                "was_augmented": outcome.was_augmented,
                "masks_applied": len(outcome.placements),
            }
        )
    (preview_dir / "legend.json").write_text(
        json.dumps({"colors": PREVIEW_LEGEND, "previews": summary}, indent=1)
    )
    click.echo(f"wrote {len(summary)} previews to {preview_dir}")


@main.command("stats")
@click.option("--annotations", "annotation_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--images", "image_root", required=True,
              type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--iou-thresh", type=float, default=0.5, callback=_unit_interval, show_default=True)
@click.option("--json-out", type=click.Path(path_type=Path), default=None,
              help="Also write the statistics as JSON.")
def cmd_stats(annotation_path, image_root, iou_thresh, json_out):
    """Print dataset statistics and the Eq.-style exclusion fraction."""
    try:
        manifest = load_dataset(annotation_path, image_root)
    except DatasetError as exc:
        raise click.ClickException(str(exc)) from exc

    per_image = []
    box_total = excluded_total = 0
    for entry in manifest.images:
        boxes = manifest.boxes_for(entry.image_id)
        keep = non_overlapping_boxes(boxes, iou_thresh)
        max_iou = 0.0
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                max_iou = max(max_iou, iou(boxes[i], boxes[j]))
        box_total += len(boxes)
        excluded_total += len(boxes) - len(keep)
        per_image.append(
            {
                "image_id": entry.image_id,
                "boxes": len(boxes),
                "excluded": len(boxes) - len(keep),
                "max_pairwise_iou": max_iou,
            }
        )

    n_images = len(manifest.images)
    stats = {
        "image_count": n_images,
        "box_count": box_total,
        "mean_boxes_per_image": box_total / n_images if n_images else 0.0,
        "iou_threshold": iou_thresh,
        "excluded_fraction": excluded_total / box_total if box_total else 0.0,
        "dropped_degenerate_boxes": manifest.dropped_boxes,
        "per_image": per_image,
    }
    click.echo(f"images:               {stats['image_count']}")
    click.echo(f"boxes:                {stats['box_count']}")
    click.echo(f"mean boxes per image: {stats['mean_boxes_per_image']:.3f}")
    click.echo(f"excluded fraction:    {stats['excluded_fraction']:.4f} (iou > {iou_thresh})")
    if json_out is not None:
        json_out.parent.mkdir(parents=True, exist_ok=True)
        json_out.write_text(json.dumps(stats, indent=1))
        click.echo(f"wrote {json_out}")


if __name__ == "__main__":
    main()
