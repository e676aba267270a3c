"""Per-channel intensity histograms, dominant-color estimation, mask-color strategies."""

from __future__ import annotations

from enum import Enum
from typing import Tuple

import numpy as np

RGB = Tuple[int, int, int]

_CHANNELS = {"R": 0, "G": 1, "B": 2}


class MaskColor(str, Enum):
    BLACK = "black"
    GRAY = "gray"
    WHITE = "white"
    RANDOM = "random"
    GLOBAL_DOMINANT = "global_dominant"


_CONSTANTS = {
    MaskColor.BLACK: (0, 0, 0),
    MaskColor.GRAY: (128, 128, 128),
    MaskColor.WHITE: (255, 255, 255),
}


def _check_image(image: np.ndarray) -> None:
    if image.ndim != 3 or image.shape[2] != 3:
        raise ValueError(f"expected HxWx3 RGB array, got shape {image.shape}")
    if image.shape[0] == 0 or image.shape[1] == 0:
        raise ValueError("image has zero pixels")
    if image.dtype != np.uint8:
        raise ValueError(f"expected uint8 pixels, got {image.dtype}")


def channel_histogram(image: np.ndarray, channel) -> np.ndarray:
    """256-bin intensity histogram of one channel ('R'/'G'/'B' or 0/1/2)."""
    _check_image(image)
    idx = _CHANNELS[channel] if isinstance(channel, str) else int(channel)
    if idx not in (0, 1, 2):
        raise ValueError(f"unknown channel {channel!r}")
    return np.bincount(image[:, :, idx].ravel(), minlength=256)


def dominant_color(image: np.ndarray) -> RGB:
    """Per-channel histogram argmax; ties break toward the smallest intensity."""
    _check_image(image)
    return tuple(int(np.argmax(channel_histogram(image, c))) for c in range(3))


def resolve_mask_color(strategy: MaskColor, image: np.ndarray, rng: np.random.Generator) -> RGB:
    """Pick the paint color for one mask application.

    Constant strategies consume no rng draws; `random` consumes three
    (r, g, b). `global_dominant` recomputes from the image; callers that
    paint several masks per image should compute dominant_color once and
    reuse it.
    """
    strategy = MaskColor(strategy)
    if strategy in _CONSTANTS:
        return _CONSTANTS[strategy]
    if strategy is MaskColor.RANDOM:
        return tuple(int(rng.integers(0, 256)) for _ in range(3))
    return dominant_color(image)
