"""BoundAugmentor: validated, buffer-based access to the core augmentor.

Results are byte-identical to what the bboxcut CLI produces for the same
(seed, image_id, pixels, boxes), because both go through the same per-image
rng derivation.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

import numpy as np

from bboxcut.augment import (
    AnnotatedImage,
    AugmentationConfig,
    MaskPlacement,
    augment_annotated,
)
from bboxcut.geometry import clip_box

_BOUND_METHODS = ("bboxcut", "none")


class BoundAugmentor:
    """Immutable augmentor handle, shareable across host threads.

    Construction validates the configuration with the same rules as the core
    library; baseline methods are CLI-only and rejected here.
    """

    def __init__(self, config: AugmentationConfig | None = None, **kwargs):
        if config is None:
            config = AugmentationConfig(**kwargs)
        elif kwargs:
            raise TypeError("pass either a config object or keyword knobs, not both")
        if config.method not in _BOUND_METHODS:
            raise ValueError(
                f"binding supports methods {_BOUND_METHODS}, got {config.method!r}"
            )
        self._config = config

    @property
    def config(self) -> AugmentationConfig:
        return self._config

    def augment(
        self,
        image: np.ndarray,
        boxes: Sequence[Tuple[float, float, float, float]],
        image_id: str,
    ) -> Tuple[np.ndarray, List[MaskPlacement]]:
        """Augment one HxWx3 uint8 buffer. The input buffer is never mutated.

        Boxes are (x, y, w, h) in pixels; they are clipped to the image and
        degenerate boxes are dropped, matching dataset ingestion.
        """
        if not isinstance(image, np.ndarray):
            raise TypeError(f"image must be a numpy array, got {type(image).__name__}")
        if image.dtype != np.uint8:
            raise TypeError(f"image must be uint8, got dtype {image.dtype}")
        if image.ndim != 3 or image.shape[2] != 3:
            raise ValueError(f"image must be HxWx3 RGB, got shape {image.shape}")
        if not image.flags["C_CONTIGUOUS"]:
            raise ValueError("image buffer must be C-contiguous")

        height, width = image.shape[:2]
        clipped = []
        for raw in boxes:
            if len(raw) != 4:
                raise ValueError(f"each box must be (x, y, w, h), got {raw!r}")
            box = clip_box(*raw, width, height)
            if box is not None:
                clipped.append(box)

        annotated = AnnotatedImage(image_id=str(image_id), pixels=image, boxes=tuple(clipped))
        outcome = augment_annotated(annotated, self._config)
        return outcome.image, list(outcome.placements)
