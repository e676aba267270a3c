"""In-process binding for training loops: raw pixel buffers in, masked buffers out."""

from .augmentor import BoundAugmentor

__version__ = "0.1.0"

__all__ = ["BoundAugmentor"]
