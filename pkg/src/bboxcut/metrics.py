"""Occlusion-coverage statistics over an augmentation run."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Optional, Sequence

from .augment import AugmentationConfig, AugmentationOutcome
from .dataset_io import DatasetManifest

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class PerImageStats:
    image_id: str
    was_augmented: bool
    total_boxes: int
    eligible_boxes: int
    retained_boxes: int
    masks_applied: int
    mean_masked_fraction: Optional[float]  # over masked boxes; None when no masks


@dataclass(frozen=True)
class AggregateStats:
    image_count: int
    augmented_fraction: float
    masked_box_fraction: float  # retained draws among eligible boxes
    mean_masked_fraction: float
    max_masked_fraction: float
    dropped_degenerate_boxes: int
    failed_images: int


@dataclass(frozen=True)
class AugmentationReport:
    schema_version: int
    config: dict
    per_image: List[PerImageStats]
    aggregate: AggregateStats

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1)

    def write(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json())
        return path


def _masked_fractions(outcome: AugmentationOutcome, boxes) -> List[float]:
    fractions = []
    for placement in outcome.placements:
        region = placement.region
        if region.parent_index < 0:
            continue  # box-agnostic baseline placement
        parent = boxes[region.parent_index]
        fractions.append((region.w * region.h) / (parent.w * parent.h))
    return fractions


def build_report(
    outcomes: Sequence[Optional[AugmentationOutcome]],
    manifest: DatasetManifest,
    config: AugmentationConfig,
) -> AugmentationReport:
    """Fold per-image placement records into a machine-readable report.

    Outcomes must align 1:1 with manifest.images; None entries mark failed
    images and are excluded from the statistics.
    """
    if len(outcomes) != len(manifest.images):
        raise ValueError(
            f"{len(outcomes)} outcomes do not align with {len(manifest.images)} images"
        )

    per_image: List[PerImageStats] = []
    all_fractions: List[float] = []
    augmented = eligible_total = retained_total = failed = 0
    for entry, outcome in zip(manifest.images, outcomes):
        if outcome is None:
            failed += 1
            continue
        boxes = manifest.boxes_for(entry.image_id)
        fractions = _masked_fractions(outcome, boxes)
        all_fractions.extend(fractions)
        augmented += outcome.was_augmented
        eligible_total += outcome.eligible_count
        retained_total += outcome.retained_count
        per_image.append(
            PerImageStats(
                image_id=entry.image_id,
                was_augmented=outcome.was_augmented,
                total_boxes=len(boxes),
                eligible_boxes=outcome.eligible_count,
                retained_boxes=outcome.retained_count,
                masks_applied=len(outcome.placements),
                mean_masked_fraction=sum(fractions) / len(fractions) if fractions else None,
            )
        )

    n = len(per_image)
    aggregate = AggregateStats(
        image_count=n,
        augmented_fraction=augmented / n if n else 0.0,
        masked_box_fraction=retained_total / eligible_total if eligible_total else 0.0,
        mean_masked_fraction=sum(all_fractions) / len(all_fractions) if all_fractions else 0.0,
        max_masked_fraction=max(all_fractions) if all_fractions else 0.0,
        dropped_degenerate_boxes=manifest.dropped_boxes,
        failed_images=failed,
    )
    cfg = asdict(config)
    cfg["mask_color"] = config.mask_color.value
    return AugmentationReport(
        schema_version=SCHEMA_VERSION, config=cfg, per_image=per_image, aggregate=aggregate
    )
