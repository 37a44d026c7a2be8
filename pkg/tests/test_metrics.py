import io

import numpy as np
import pytest

from mefuse.metrics import (
    CSV_HEADER,
    BRIGHTNESS_MEAN,
    CONTRAST_ALPHA,
    CONTRAST_BETA,
    CONTRAST_SCALE,
    discrete_entropy,
    local_contrast,
    score_report,
    statistical_naturalness,
    write_csv,
)

from oracles import scalar_entropy


def gray_image(levels255):
    """RGB image whose grayscale rendering equals the given 0..255 array."""
    g = np.asarray(levels255, dtype=np.float64) / 255.0
    return np.stack([g, g, g], axis=-1)


class TestDiscreteEntropy:
    def test_constant_image(self):
        assert discrete_entropy(np.full((8, 8, 3), 0.5)) == 0.0

    def test_uniform_256_levels(self):
        img = gray_image(np.arange(256).reshape(16, 16))
        assert discrete_entropy(img) == pytest.approx(8.0, abs=1e-12)

    def test_two_level_histogram(self):
        levels = np.zeros((4, 4))
        levels[0] = 200.0  # 4 of 16 pixels -> 1/4 vs 3/4
        expected = scalar_entropy([12, 4])
        assert expected == pytest.approx(0.811278, abs=1e-6)
        assert discrete_entropy(gray_image(levels)) == pytest.approx(expected, rel=1e-12)

    def test_permutation_invariant(self, rng):
        img = rng.random((12, 9, 3))
        flat = img.reshape(-1, 3)
        shuffled = flat[rng.permutation(len(flat))].reshape(img.shape)
        assert discrete_entropy(img) == pytest.approx(
            discrete_entropy(shuffled), abs=1e-12)

    def test_bounds(self, rng):
        for _ in range(5):
            e = discrete_entropy(rng.random((10, 10, 3)))
            assert 0.0 <= e <= 8.0

    def test_rounds_half_up(self):
        # 127.5/255 quantises to level 128, away from level 127
        a = gray_image(np.full((4, 4), 127.5))
        b = gray_image(np.full((4, 4), 128.0))
        assert discrete_entropy(np.concatenate([a, b])) == 0.0


class TestStatisticalNaturalness:
    def test_joint_mode_scores_one(self):
        # checkerboard around the brightness mode; local std scales linearly
        # with amplitude, so the contrast mode is hit exactly
        yy, xx = np.mgrid[0:64, 0:64]
        pattern = np.where((yy + xx) % 2 == 0, 1.0, -1.0)
        d_target = CONTRAST_SCALE * (CONTRAST_ALPHA - 1) / (CONTRAST_ALPHA + CONTRAST_BETA - 2)
        base = local_contrast(pattern)
        amplitude = d_target / base
        img = gray_image(BRIGHTNESS_MEAN + amplitude * pattern)
        assert statistical_naturalness(img) == pytest.approx(1.0, abs=1e-9)

    def test_all_black_scores_zero(self):
        assert statistical_naturalness(np.zeros((16, 16, 3))) < 1e-4

    def test_flat_midgray_scores_zero(self):
        img = gray_image(np.full((16, 16), 128.0))
        assert statistical_naturalness(img) == pytest.approx(0.0, abs=1e-12)

    def test_range(self, rng):
        for _ in range(5):
            n = statistical_naturalness(rng.random((14, 18, 3)))
            assert 0.0 <= n <= 1.0

    def test_flip_invariance(self, rng):
        img = rng.random((15, 21, 3))
        n = statistical_naturalness(img)
        assert statistical_naturalness(img[::-1]) == pytest.approx(n, abs=1e-9)
        assert statistical_naturalness(img[:, ::-1]) == pytest.approx(n, abs=1e-9)

    def test_too_small_rejected(self, rng):
        with pytest.raises(ValueError, match="smaller than"):
            statistical_naturalness(rng.random((10, 30, 3)))


class TestScoreReport:
    def test_constant_image_row(self):
        rows = score_report([("flat", np.full((12, 12, 3), 0.4))], method_id="input")
        assert len(rows) == 1
        assert rows[0].image_id == "flat"
        assert rows[0].method_id == "input"
        assert rows[0].entropy_bits == 0.0
        buf = io.StringIO()
        write_csv(rows, buf)
        assert "-0.000000" not in buf.getvalue()  # no negative zero leaks

    def test_deterministic_rows(self, rng):
        img = rng.random((16, 16, 3))
        rows = score_report([("a", img), ("a", img)])
        assert rows[0] == rows[1]

    def test_order_preserved(self, rng):
        imgs = [(f"im{i}", rng.random((12, 12, 3))) for i in range(4)]
        rows = score_report(imgs)
        assert [r.image_id for r in rows] == [f"im{i}" for i in range(4)]

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            score_report([])

    def test_csv_schema(self, rng):
        rows = score_report([("x", rng.random((12, 12, 3)))], method_id="proposed")
        buf = io.StringIO()
        write_csv(rows, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == CSV_HEADER == "image_id,method_id,entropy_bits,naturalness"
        fields = lines[1].split(",")
        assert fields[0] == "x" and fields[1] == "proposed"
        for num in fields[2:]:
            whole, frac = num.split(".")
            assert len(frac) == 6
