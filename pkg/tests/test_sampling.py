import numpy as np
import pytest

from roadocc import color
from roadocc.errors import ConfigurationError, DimensionError
from roadocc.sampling import (
    FULL_ROI,
    SUPERPIXEL_MEDIANS,
    RoiSpec,
    SampleSet,
    augment_noise,
    extract_roi,
    reduce_superpixels,
    unit_bounds,
)


def features_for(img, rep_name):
    rep = color.get_representation(rep_name)
    return color.rescale_to_unit(color.extract(img, rep), rep)


class TestExtractRoi:
    def test_default_yields_13266_rows(self):
        img = np.random.default_rng(0).random((480, 640, 3))
        roi = extract_roi(features_for(img, "RGB"))
        assert roi.n == 13266
        assert roi.source == FULL_ROI

    def test_constant_gray_saturation_zero(self):
        img = np.full((80, 260, 3), 0.5)
        rep = color.get_representation("S")
        feat = color.extract(img, rep)
        roi = extract_roi(feat)
        assert np.all(roi.rows == 0.0)

    def test_too_small_image_raises(self):
        img = np.random.default_rng(0).random((50, 100, 3))
        with pytest.raises(DimensionError, match="width"):
            extract_roi(features_for(img, "R"))

    def test_too_short_image_raises(self):
        img = np.random.default_rng(0).random((40, 300, 3))
        with pytest.raises(DimensionError, match="height"):
            extract_roi(features_for(img, "R"))

    def test_content_outside_roi_ignored(self):
        rng = np.random.default_rng(1)
        img1 = rng.random((100, 210, 3))
        img2 = img1.copy()
        img2[:30] = rng.random((30, 210, 3))
        roi1 = extract_roi(features_for(img1, "RGB"))
        roi2 = extract_roi(features_for(img2, "RGB"))
        assert np.array_equal(roi1.rows, roi2.rows)


class TestReduceSuperpixels:
    def _roi(self, values):
        return SampleSet(values.reshape(-1, values.shape[-1]), source=FULL_ROI, shape=values.shape[:2])

    def test_constant_roi(self):
        block = np.full((66, 201, 2), 0.7)
        reduced = reduce_superpixels(self._roi(block))
        assert reduced.n == 90
        assert reduced.source == SUPERPIXEL_MEDIANS
        assert np.all(reduced.rows == 0.7)

    def test_default_grid_count(self):
        block = np.random.default_rng(0).random((66, 201, 3))
        assert reduce_superpixels(self._roi(block)).n == 90

    def test_median_by_sorting(self):
        # one cell: 3x3 ROI with odd count, median must be the middle value
        vals = np.array([0.1, 0.5, 0.9, 0.3, 0.7, 0.2, 0.8, 0.4, 0.6]).reshape(3, 3, 1)
        reduced = reduce_superpixels(self._roi(vals), grid=(1, 1))
        assert reduced.rows[0, 0] == np.sort(vals.ravel())[4]

    def test_median_containment(self):
        block = np.random.default_rng(3).random((66, 201, 2))
        reduced = reduce_superpixels(self._roi(block))
        assert reduced.rows.min() >= block.min()
        assert reduced.rows.max() <= block.max()

    def test_too_fine_grid_rejected(self):
        block = np.random.default_rng(0).random((4, 4, 1))
        with pytest.raises(ConfigurationError):
            reduce_superpixels(self._roi(block), grid=(8, 2))

    def test_requires_full_roi(self):
        s = SampleSet(np.zeros((5, 1)), source=SUPERPIXEL_MEDIANS)
        with pytest.raises(ConfigurationError):
            reduce_superpixels(s)


class TestAugmentNoise:
    def _samples(self, n=90, d=2, seed=0):
        rows = 0.3 + 0.4 * np.random.default_rng(seed).random((n, d))
        return SampleSet(rows, source=SUPERPIXEL_MEDIANS, bounds=unit_bounds(d))

    def test_sigma_zero_exact_copies(self):
        s = self._samples()
        out = augment_noise(s, sigma=0.0, seed=1)
        assert out.n == 2 * s.n
        assert np.array_equal(out.rows[: s.n], s.rows)
        assert np.array_equal(out.rows[s.n :], s.rows)

    def test_duplication_count(self):
        out = augment_noise(self._samples(n=90), seed=2)
        assert out.n == 180

    def test_noise_std_matches(self):
        # centered samples keep the clamp inactive
        rows = np.full((50_000, 1), 0.5)
        s = SampleSet(rows, source=FULL_ROI, bounds=unit_bounds(1), shape=(50_000, 1))
        out = augment_noise(s, seed=3)
        noise = out.rows[s.n :] - rows
        assert np.std(noise) == pytest.approx(30 / 256, abs=0.002)

    def test_seed_reproducible(self):
        s = self._samples()
        a = augment_noise(s, seed=11)
        b = augment_noise(s, seed=11)
        assert np.array_equal(a.rows, b.rows)

    def test_clamped_to_bounds(self):
        rows = np.zeros((1000, 1))
        s = SampleSet(rows + 0.01, source=FULL_ROI, bounds=unit_bounds(1), shape=(1000, 1))
        out = augment_noise(s, sigma=0.5, seed=4)
        assert out.rows.min() >= 0.0
        assert out.rows.max() <= 1.0

    def test_negative_sigma_rejected(self):
        with pytest.raises(ConfigurationError):
            augment_noise(self._samples(), sigma=-0.1, seed=0)
