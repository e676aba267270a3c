"""The BBoxCut augmentor: per-image pipeline and the dataset-level loop."""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .color import RGB, MaskColor, dominant_color, resolve_mask_color
from .geometry import BoundingBox, MaskRegion, non_overlapping_boxes, sample_mask_region

METHODS = ("bboxcut", "cutout", "region_aware_random_erasing", "none")


@dataclass(frozen=True)
class AnnotatedImage:
    """An 8-bit RGB raster plus its ground-truth boxes and a stable identifier."""

    image_id: str
    pixels: np.ndarray  # HxWx3 uint8
    boxes: Tuple[BoundingBox, ...]

    def __post_init__(self):
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3:
            raise ValueError(f"expected HxWx3 pixels, got shape {self.pixels.shape}")
        if self.pixels.shape[0] == 0 or self.pixels.shape[1] == 0:
            raise ValueError(f"image {self.image_id!r} has zero pixels")
        if self.pixels.dtype != np.uint8:
            raise ValueError(f"image {self.image_id!r}: expected uint8, got {self.pixels.dtype}")
        h, w = self.pixels.shape[:2]
        for b in self.boxes:
            if b.x2 > w or b.y2 > h:
                raise ValueError(f"image {self.image_id!r}: box {b} exceeds {w}x{h}")
        object.__setattr__(self, "boxes", tuple(self.boxes))


@dataclass(frozen=True)
class AugmentationConfig:
    """All knobs of the augmentation loop. Probabilities/ratios must lie in [0, 1]."""

    p_aug: float = 0.3
    p_m: float = 0.3
    alpha_w: float = 0.3
    alpha_h: float = 0.3
    iou_threshold: float = 0.5
    mask_color: MaskColor = MaskColor.GLOBAL_DOMINANT
    method: str = "bboxcut"
    seed: int = 0

    def __post_init__(self):
        for name in ("p_aug", "p_m", "alpha_w", "alpha_h", "iou_threshold"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        object.__setattr__(self, "mask_color", MaskColor(self.mask_color))
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


@dataclass(frozen=True)
class MaskPlacement:
    """A painted sub-rectangle. painted_color is None for noise fills."""

    region: MaskRegion
    painted_color: Optional[RGB]


@dataclass(frozen=True)
class AugmentationOutcome:
    image: np.ndarray
    was_augmented: bool
    eligible_count: int
    retained_count: int
    placements: Tuple[MaskPlacement, ...]


def rng_for_image(seed: int, image_id: str) -> np.random.Generator:
    """Derive an image-local random stream from the run seed and stable image id.

    SHA-256 of "<seed>\\x1f<image_id>" seeds a PCG64 generator, so results are
    independent of processing order and worker scheduling.
    """
    digest = hashlib.sha256(f"{seed}\x1f{image_id}".encode("utf-8")).digest()
    words = [int.from_bytes(digest[i : i + 4], "little") for i in range(0, 32, 4)]
    return np.random.default_rng(np.random.SeedSequence(words))


def apply_mask(image: np.ndarray, region: MaskRegion, color: RGB) -> np.ndarray:
    """Return a copy of `image` with every pixel inside `region` set to `color`."""
    h, w = image.shape[:2]
    if region.x < 0 or region.y < 0 or region.x2 > w or region.y2 > h:
        raise ValueError(f"mask region {region} exceeds image bounds {w}x{h}")
    out = image.copy()
    out[region.y : region.y2, region.x : region.x2] = color
    return out


def _passthrough(annotated: AnnotatedImage) -> AugmentationOutcome:
    return AugmentationOutcome(
        image=annotated.pixels.copy(),
        was_augmented=False,
        eligible_count=0,
        retained_count=0,
        placements=(),
    )


def augment_image(
    annotated: AnnotatedImage, config: AugmentationConfig, rng: np.random.Generator
) -> AugmentationOutcome:
    """Run the per-image masking pipeline.

    Draw order is fixed: the augmentation gate, one retain draw per eligible
    box in annotation order, then per retained box the four region draws
    followed by three color draws when the strategy is `random`.
    """
    if rng.random() > config.p_aug:
        return _passthrough(annotated)

    eligible = non_overlapping_boxes(annotated.boxes, config.iou_threshold)
    dom: Optional[RGB] = None
    if config.mask_color is MaskColor.GLOBAL_DOMINANT and eligible:
        dom = dominant_color(annotated.pixels)

    retained = [i for i in eligible if rng.random() <= config.p_m]

    out = annotated.pixels.copy()
    placements: List[MaskPlacement] = []
    for i in retained:
        region = sample_mask_region(
            annotated.boxes[i], config.alpha_w, config.alpha_h, rng, parent_index=i
        )
        if region is None:
            continue
        if config.mask_color is MaskColor.GLOBAL_DOMINANT:
            paint = dom
        else:
            paint = resolve_mask_color(config.mask_color, annotated.pixels, rng)
        out[region.y : region.y2, region.x : region.x2] = paint
        placements.append(MaskPlacement(region=region, painted_color=paint))

    return AugmentationOutcome(
        image=out,
        was_augmented=True,
        eligible_count=len(eligible),
        retained_count=len(retained),
        placements=tuple(placements),
    )


def augment_annotated(
    annotated: AnnotatedImage,
    config: AugmentationConfig,
    cutout_config=None,
    erasing_config=None,
) -> AugmentationOutcome:
    """Dispatch one image through the configured method with its derived rng."""
    rng = rng_for_image(config.seed, annotated.image_id)
    if config.method == "none":
        return _passthrough(annotated)
    if config.method == "bboxcut":
        return augment_image(annotated, config, rng)

    from . import baselines

    if config.method == "cutout":
        cfg = cutout_config or baselines.CutoutConfig()
        image, placements, applied = baselines.cutout(annotated.pixels, cfg, rng)
    else:
        cfg = erasing_config or baselines.RegionAwareREConfig()
        image, placements, applied = baselines.region_aware_random_erasing(annotated, cfg, rng)
    return AugmentationOutcome(
        image=image,
        was_augmented=applied,
        eligible_count=0,
        retained_count=0,
        placements=tuple(placements),
    )


def augment_dataset(
    dataset: Sequence[AnnotatedImage],
    config: AugmentationConfig,
    cutout_config=None,
    erasing_config=None,
    workers: int = 1,
    failures: Optional[list] = None,
) -> List[Optional[AugmentationOutcome]]:
    """Augment a sequence of images, preserving order.

    Each outcome depends only on (pixels, boxes, config, image_id), so any
    worker count produces identical results. Per-image errors are recorded
    in `failures` as (image_id, message) and yield None in the output.
    """

    def run_one(annotated: AnnotatedImage) -> Optional[AugmentationOutcome]:
        try:
            return augment_annotated(annotated, config, cutout_config, erasing_config)
        except Exception as exc:  # noqa: BLE001 - collected per image
            if failures is not None:
                failures.append((annotated.image_id, str(exc)))
                return None
            raise

    if workers <= 1 or len(dataset) <= 1:
        return [run_one(a) for a in dataset]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_one, dataset))
