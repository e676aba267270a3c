import numpy as np
import pytest

from bboxcut.augment import AnnotatedImage
from bboxcut.baselines import (
    CutoutConfig,
    RegionAwareREConfig,
    cutout,
    region_aware_random_erasing,
)
from bboxcut.geometry import BoundingBox, iou
from conftest import random_box


class TestCutout:
    def test_gate_zero_unchanged(self):
        img = np.full((16, 16, 3), 40, dtype=np.uint8)
        out, placements, applied = cutout(img, CutoutConfig(apply_probability=0.0),
                                          np.random.default_rng(0))
        assert not applied and placements == []
        assert np.array_equal(out, img)

    def test_single_black_pixel(self):
        img = np.full((8, 8, 3), 255, dtype=np.uint8)
        out, placements, applied = cutout(
            img, CutoutConfig(side=1, count=1, apply_probability=1.0), np.random.default_rng(1)
        )
        assert applied and len(placements) == 1
        assert int((out == 0).all(axis=2).sum()) == 1

    def test_placements_inside_image(self):
        img = np.zeros((128, 96, 3), dtype=np.uint8)
        cfg = CutoutConfig(side=11, count=1, apply_probability=1.0)
        rng = np.random.default_rng(2)
        for _ in range(10_000):
            _, placements, _ = cutout(img, cfg, rng)
            r = placements[0].region
            assert r.x >= 0 and r.y >= 0 and r.x2 <= 96 and r.y2 <= 128

    def test_side_too_large_rejected(self):
        img = np.zeros((8, 8, 3), dtype=np.uint8)
        with pytest.raises(ValueError):
            cutout(img, CutoutConfig(side=9, apply_probability=1.0), np.random.default_rng(0))

    def test_default_side_is_eighth_of_shorter_dim(self):
        img = np.full((80, 200, 3), 9, dtype=np.uint8)
        _, placements, _ = cutout(img, CutoutConfig(apply_probability=1.0),
                                  np.random.default_rng(3))
        assert placements[0].region.w == 10 and placements[0].region.h == 10

    def test_annotation_independent(self):
        # cutout never consults boxes, so identical pixels + rng give identical bytes
        rng_img = np.random.default_rng(4)
        img = rng_img.integers(0, 256, size=(64, 64, 3), dtype=np.uint8)
        cfg = CutoutConfig(side=8, count=3, apply_probability=1.0)
        out1, p1, _ = cutout(img, cfg, np.random.default_rng(99))
        out2, p2, _ = cutout(img.copy(), cfg, np.random.default_rng(99))
        assert np.array_equal(out1, out2)
        assert p1 == p2

    def test_zero_inside_placements(self):
        rng = np.random.default_rng(5)
        img = rng.integers(1, 256, size=(64, 64, 3), dtype=np.uint8)
        cfg = CutoutConfig(side=8, count=2, apply_probability=1.0)
        out, placements, _ = cutout(img, cfg, np.random.default_rng(6))
        for p in placements:
            r = p.region
            assert (out[r.y:r.y2, r.x:r.x2] == 0).all()

    def test_locality(self):
        rng = np.random.default_rng(7)
        img = rng.integers(0, 256, size=(48, 48, 3), dtype=np.uint8)
        cfg = CutoutConfig(side=6, count=2, apply_probability=1.0)
        out, placements, _ = cutout(img, cfg, np.random.default_rng(8))
        allowed = np.zeros((48, 48), dtype=bool)
        for p in placements:
            r = p.region
            allowed[r.y:r.y2, r.x:r.x2] = True
        diff = (out != img).any(axis=2)
        assert not (diff & ~allowed).any()


class TestRegionAwareRandomErasing:
    def make_annotated(self, rng, n_boxes=2, size=(64, 64)):
        h, w = size
        pixels = rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8)
        boxes = tuple(random_box(rng, w, h) for _ in range(n_boxes))
        return AnnotatedImage("x", pixels, boxes)

    def test_vacuous_constraint_always_accepts(self):
        rng = np.random.default_rng(9)
        annotated = self.make_annotated(rng)
        cfg = RegionAwareREConfig(apply_probability=1.0, max_box_overlap=1.0)
        _, placements, applied = region_aware_random_erasing(annotated, cfg,
                                                             np.random.default_rng(10))
        assert applied and len(placements) == 1

    def test_full_image_box_blocks_all_candidates(self):
        pixels = np.zeros((32, 32, 3), dtype=np.uint8)
        annotated = AnnotatedImage("y", pixels, (BoundingBox(0, 0, 32, 32),))
        cfg = RegionAwareREConfig(apply_probability=1.0, max_box_overlap=0.0)
        out, placements, applied = region_aware_random_erasing(annotated, cfg,
                                                               np.random.default_rng(11))
        assert applied and placements == []
        assert np.array_equal(out, pixels)

    def test_accepted_placements_respect_overlap_ceiling(self):
        rng = np.random.default_rng(12)
        cfg = RegionAwareREConfig(apply_probability=1.0)
        accepted = 0
        stream = np.random.default_rng(13)
        while accepted < 10_000:
            annotated = self.make_annotated(rng, n_boxes=3)
            _, placements, _ = region_aware_random_erasing(annotated, cfg, stream)
            for p in placements:
                r = p.region
                candidate = BoundingBox(r.x, r.y, r.w, r.h)
                for b in annotated.boxes:
                    assert iou(candidate, b) <= cfg.max_box_overlap
                accepted += 1

    def test_locality(self):
        rng = np.random.default_rng(14)
        cfg = RegionAwareREConfig(apply_probability=1.0)
        for _ in range(100):
            annotated = self.make_annotated(rng)
            out, placements, _ = region_aware_random_erasing(
                annotated, cfg, np.random.default_rng(int(rng.integers(1 << 30)))
            )
            allowed = np.zeros(out.shape[:2], dtype=bool)
            for p in placements:
                r = p.region
                allowed[r.y:r.y2, r.x:r.x2] = True
            diff = (out != annotated.pixels).any(axis=2)
            assert not (diff & ~allowed).any()

    def test_config_validation(self):
        with pytest.raises(ValueError):
            RegionAwareREConfig(area_range=(0.2, 0.1))
        with pytest.raises(ValueError):
            RegionAwareREConfig(aspect_range=(0.0, 1.0))
        with pytest.raises(ValueError):
            RegionAwareREConfig(max_resample_attempts=0)
