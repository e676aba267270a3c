"""Bounding-box-aware occlusion-simulating augmentation for detection datasets."""

from .augment import (
    AnnotatedImage,
    AugmentationConfig,
    AugmentationOutcome,
    MaskPlacement,
    apply_mask,
    augment_annotated,
    augment_dataset,
    augment_image,
    rng_for_image,
)
from .baselines import CutoutConfig, RegionAwareREConfig, cutout, region_aware_random_erasing
from .color import MaskColor, channel_histogram, dominant_color, resolve_mask_color
from .dataset_io import DatasetError, DatasetManifest, load_dataset, write_dataset
from .geometry import (
    BoundingBox,
    MaskRegion,
    clip_box,
    iou,
    non_overlapping_boxes,
    sample_mask_region,
)
from .metrics import AugmentationReport, build_report

__version__ = "0.1.0"

__all__ = [
    "AnnotatedImage",
    "AugmentationConfig",
    "AugmentationOutcome",
    "AugmentationReport",
    "BoundingBox",
    "CutoutConfig",
    "DatasetError",
    "DatasetManifest",
    "MaskColor",
    "MaskPlacement",
    "MaskRegion",
    "RegionAwareREConfig",
    "apply_mask",
    "augment_annotated",
    "augment_dataset",
    "augment_image",
    "build_report",
    "channel_histogram",
    "clip_box",
    "cutout",
    "dominant_color",
    "iou",
    "load_dataset",
    "non_overlapping_boxes",
    "region_aware_random_erasing",
    "resolve_mask_color",
    "rng_for_image",
    "sample_mask_region",
    "write_dataset",
]
