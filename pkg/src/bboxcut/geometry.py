"""Axis-aligned bounding-box arithmetic: IoU, overlap filtering, mask-region sampling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class BoundingBox:
    """Integer pixel rectangle. (x, y) is the top-left corner; extents are w x h."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.x < 0 or self.y < 0:
            raise ValueError(f"box origin must be non-negative, got ({self.x}, {self.y})")
        if self.w < 1 or self.h < 1:
            raise ValueError(f"box extents must be >= 1, got {self.w}x{self.h}")

    @property
    def x2(self) -> int:
        """Exclusive right edge."""
        return self.x + self.w

    @property
    def y2(self) -> int:
        """Exclusive bottom edge."""
        return self.y + self.h

    @property
    def area(self) -> int:
        return self.w * self.h


@dataclass(frozen=True)
class MaskRegion:
    """Sub-rectangle of a parent box selected for painting.

    parent_index is the position of the owning box in the image's box list,
    or -1 for box-agnostic placements (baseline methods).
    """

    parent_index: int
    x: int
    y: int
    w: int
    h: int

    @property
    def x2(self) -> int:
        return self.x + self.w

    @property
    def y2(self) -> int:
        return self.y + self.h


def clip_box(x, y, w, h, width: int, height: int) -> Optional[BoundingBox]:
    """Clip a possibly-float (x, y, w, h) rectangle to image bounds.

    Returns None when the clipped extent falls below one pixel.
    """
    x0 = max(0.0, float(x))
    y0 = max(0.0, float(y))
    x1 = min(float(width), float(x) + float(w))
    y1 = min(float(height), float(y) + float(h))
    nx, ny = int(round(x0)), int(round(y0))
    nw, nh = int(round(x1)) - nx, int(round(y1)) - ny
    if nw < 1 or nh < 1:
        return None
    return BoundingBox(nx, ny, nw, nh)


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection-over-union of two boxes. Exact for integer coordinates."""
    iw = min(a.x2, b.x2) - max(a.x, b.x)
    ih = min(a.y2, b.y2) - max(a.y, b.y)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    union = a.area + b.area - inter
    return inter / union


def non_overlapping_boxes(boxes: Sequence[BoundingBox], iou_threshold: float) -> List[int]:
    """Indices of boxes whose IoU with every other box is <= iou_threshold.

    Both members of an offending pair are excluded, so membership is
    order-independent. Output preserves input order.
    """
    if not 0.0 <= iou_threshold <= 1.0:
        raise ValueError(f"iou_threshold must be in [0, 1], got {iou_threshold}")
    n = len(boxes)
    if n <= 1:
        return list(range(n))

    x1 = np.array([b.x for b in boxes], dtype=np.int64)
    y1 = np.array([b.y for b in boxes], dtype=np.int64)
    x2 = np.array([b.x2 for b in boxes], dtype=np.int64)
    y2 = np.array([b.y2 for b in boxes], dtype=np.int64)
    area = (x2 - x1) * (y2 - y1)

    iw = np.minimum(x2[:, None], x2[None, :]) - np.maximum(x1[:, None], x1[None, :])
    ih = np.minimum(y2[:, None], y2[None, :]) - np.maximum(y1[:, None], y1[None, :])
    inter = np.clip(iw, 0, None) * np.clip(ih, 0, None)
    union = area[:, None] + area[None, :] - inter
    pairwise = inter / union
    np.fill_diagonal(pairwise, 0.0)

    keep = np.all(pairwise <= iou_threshold, axis=1)
    return [i for i in range(n) if keep[i]]


def sample_mask_region(
    box: BoundingBox,
    alpha_w: float,
    alpha_h: float,
    rng: np.random.Generator,
    parent_index: int = 0,
) -> Optional[MaskRegion]:
    """Sample a mask sub-rectangle fully contained in `box`.

    Extents are uniform over the integer ranges {0, ..., round(alpha_w * w)}
    and {0, ..., round(alpha_h * h)}; a zero extent means no mask (None).
    Exactly four draws are consumed in the order w', h', x', y' regardless
    of the outcome, so a seed fully determines the downstream stream.
    """
    if not (0.0 <= alpha_w <= 1.0 and 0.0 <= alpha_h <= 1.0):
        raise ValueError(f"alpha values must be in [0, 1], got ({alpha_w}, {alpha_h})")
    w_hi = int(round(alpha_w * box.w))
    h_hi = int(round(alpha_h * box.h))
    mw = int(rng.integers(0, w_hi + 1))
    mh = int(rng.integers(0, h_hi + 1))
    mx = int(rng.integers(box.x, box.x + box.w - mw + 1))
    my = int(rng.integers(box.y, box.y + box.h - mh + 1))
    if mw == 0 or mh == 0:
        return None
    return MaskRegion(parent_index=parent_index, x=mx, y=my, w=mw, h=mh)
