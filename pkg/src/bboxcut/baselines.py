"""Comparison augmentors: Cutout and Region-aware Random Erasing."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .augment import AnnotatedImage, MaskPlacement
from .geometry import BoundingBox, MaskRegion, iou


@dataclass(frozen=True)
class CutoutConfig:
    """Fixed-size black squares at box-agnostic random positions.

    side=None means 1/8 of the shorter image dimension (at least 1 pixel).
    """

    side: Optional[int] = None
    count: int = 1
    apply_probability: float = 0.3

    def __post_init__(self):
        if self.side is not None and self.side < 1:
            raise ValueError(f"side must be >= 1, got {self.side}")
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        if not 0.0 <= self.apply_probability <= 1.0:
            raise ValueError(f"apply_probability must be in [0, 1], got {self.apply_probability}")


@dataclass(frozen=True)
class RegionAwareREConfig:
    """Random-noise rectangles rejected when they overlap ground-truth boxes."""

    area_range: Tuple[float, float] = (0.02, 0.2)
    aspect_range: Tuple[float, float] = (0.3, 3.33)
    apply_probability: float = 0.3
    max_box_overlap: float = 0.2
    max_resample_attempts: int = 10

    def __post_init__(self):
        for name, (lo, hi) in (("area_range", self.area_range), ("aspect_range", self.aspect_range)):
            if not 0 < lo <= hi:
                raise ValueError(f"{name} must satisfy 0 < min <= max, got ({lo}, {hi})")
        if not 0.0 <= self.apply_probability <= 1.0:
            raise ValueError(f"apply_probability must be in [0, 1], got {self.apply_probability}")
        if not 0.0 <= self.max_box_overlap <= 1.0:
            raise ValueError(f"max_box_overlap must be in [0, 1], got {self.max_box_overlap}")
        if self.max_resample_attempts < 1:
            raise ValueError(f"max_resample_attempts must be >= 1, got {self.max_resample_attempts}")


def cutout(
    image: np.ndarray, config: CutoutConfig, rng: np.random.Generator
) -> Tuple[np.ndarray, List[MaskPlacement], bool]:
    """Paint `count` zero-valued squares at random positions, ignoring boxes.

    Returns (image, placements, gate_passed). Consumes one gate draw, then
    (x, y) per square.
    """
    h, w = image.shape[:2]
    side = config.side if config.side is not None else max(1, min(h, w) // 8)
    if side > min(h, w):
        raise ValueError(f"cutout side {side} exceeds image dimensions {w}x{h}")
    if rng.random() > config.apply_probability:
        return image.copy(), [], False

    out = image.copy()
    placements = []
    for _ in range(config.count):
        x = int(rng.integers(0, w - side + 1))
        y = int(rng.integers(0, h - side + 1))
        out[y : y + side, x : x + side] = (0, 0, 0)
        region = MaskRegion(parent_index=-1, x=x, y=y, w=side, h=side)
        placements.append(MaskPlacement(region=region, painted_color=(0, 0, 0)))
    return out, placements, True


def region_aware_random_erasing(
    annotated: AnnotatedImage, config: RegionAwareREConfig, rng: np.random.Generator
) -> Tuple[np.ndarray, List[MaskPlacement], bool]:
    """Erase one noise rectangle that avoids heavy overlap with ground-truth boxes.

    Candidates are drawn as (area fraction, aspect ratio, x, y); a candidate
    whose IoU with any box exceeds max_box_overlap is resampled, giving up
    after max_resample_attempts with no erase.
    """
    image = annotated.pixels
    h, w = image.shape[:2]
    if rng.random() > config.apply_probability:
        return image.copy(), [], False

    for _ in range(config.max_resample_attempts):
        frac = rng.uniform(*config.area_range)
        aspect = rng.uniform(*config.aspect_range)
        target = frac * w * h
        rw = min(w, max(1, int(round(math.sqrt(target * aspect)))))
        rh = min(h, max(1, int(round(math.sqrt(target / aspect)))))
        x = int(rng.integers(0, w - rw + 1))
        y = int(rng.integers(0, h - rh + 1))
        candidate = BoundingBox(x=x, y=y, w=rw, h=rh)
        if any(iou(candidate, b) > config.max_box_overlap for b in annotated.boxes):
            continue
        out = image.copy()
        noise = rng.integers(0, 256, size=(rh, rw, 3), dtype=np.uint8)
        out[y : y + rh, x : x + rw] = noise
        region = MaskRegion(parent_index=-1, x=x, y=y, w=rw, h=rh)
        return out, [MaskPlacement(region=region, painted_color=None)], True

    return image.copy(), [], True
