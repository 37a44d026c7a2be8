import numpy as np
import pytest

from mefuse.hdrio import synth_exposures
from mefuse.imgcore import ExposureStack, PipelineConfig, geometric_mean, luminance_of
from mefuse.tonemap import build_enhanced_stack, reinhard_global, tonemap_stack

from conftest import small_radiance


class TestReinhard:
    def test_zero_maps_to_zero(self):
        assert reinhard_global(np.zeros((3, 3)), 2.0).max() == 0.0

    def test_white_point_maps_to_one(self):
        out = reinhard_global(np.array([[2.0]]), 2.0)
        assert out[0, 0] == pytest.approx(1.0, rel=1e-12)

    def test_large_white_limit(self):
        # with a huge white point the curve approaches L / (1 + L)
        out = reinhard_global(np.array([[1.0]]), 1e6)
        assert out[0, 0] == pytest.approx(0.5, abs=1e-6)
        exact = reinhard_global(np.array([[1.0]]), 1e3)
        assert exact[0, 0] == pytest.approx((1 + 1e-6) / 2, rel=1e-12)

    def test_monotone(self, rng):
        pairs = rng.random((10000, 2)) * 10
        lo = np.minimum(pairs[:, 0], pairs[:, 1])
        hi = np.maximum(pairs[:, 0], pairs[:, 1])
        keep = hi > lo
        f_lo = reinhard_global(lo[keep], 4.0)
        f_hi = reinhard_global(hi[keep], 4.0)
        assert np.all(f_lo < f_hi)

    def test_bad_white_point(self):
        with pytest.raises(ValueError):
            reinhard_global(np.ones((2, 2)), 0.0)


class TestTonemapStack:
    def test_constant_map_becomes_white(self):
        out = tonemap_stack([np.full((4, 4), 0.7)])
        assert np.allclose(out[0], 1.0, rtol=1e-12)

    def test_all_zero_passthrough(self):
        out = tonemap_stack([np.zeros((4, 4))])
        assert np.all(out[0] == 0.0)

    def test_two_pixel_hand_values(self):
        # white point 2: F(0.5) = 0.5 * 1.125 / 1.5 = 0.375, F(2) = 1
        out = tonemap_stack([np.array([[0.5, 2.0]])])[0]
        assert out[0, 0] == pytest.approx(0.375, rel=1e-12)
        assert out[0, 1] == pytest.approx(1.0, rel=1e-12)

    def test_range_and_max_on_random_stacks(self, rng):
        for _ in range(25):
            n = int(rng.integers(1, 5))
            scale = float(10.0 ** rng.uniform(-2, 2))
            maps = [scale * rng.random((11, 7)) for _ in range(n)]
            out = tonemap_stack(maps)
            for lum in out:
                assert lum.min() >= 0.0
                assert lum.max() <= 1.0 + 1e-12
                assert abs(lum.max() - 1.0) <= 1e-9

    def test_per_pixel_order_preserved(self, rng):
        lum = rng.random((9, 9)) * 3
        out = tonemap_stack([lum])[0]
        assert np.array_equal(np.argsort(lum, axis=None), np.argsort(out, axis=None))


class TestBuildEnhancedStack:
    def test_constant_midgray_single(self):
        img = np.full((12, 12, 3), 0.18)
        out = build_enhanced_stack(ExposureStack(images=(img,)), PipelineConfig())
        assert out.n == 1
        assert out.images[0].shape == (12, 12, 3)
        assert out.images[0].min() >= 0.0 and out.images[0].max() <= 1.0
        assert luminance_of(out.images[0]).max() == pytest.approx(1.0, rel=1e-9)

    def test_synthetic_stack_ordering(self, rng):
        stack = synth_exposures(small_radiance(rng), (-1.0, 0.0, 1.0))
        out = build_enhanced_stack(stack, PipelineConfig())
        assert out.n == 3
        assert out.evs == (-1.0, 0.0, 1.0)
        means = [luminance_of(img).mean() for img in out.images]
        assert means[0] < means[1] < means[2]
        for img in out.images:
            assert img.min() >= 0.0 and img.max() <= 1.0

    def test_all_black_member_handled(self, rng):
        # degenerate member: zero luminance everywhere survives every stage
        black = np.zeros((16, 16, 3))
        normal = rng.random((16, 16, 3))
        out = build_enhanced_stack(
            ExposureStack(images=(black, normal)), PipelineConfig())
        assert np.all(out.images[0] == 0.0)
        assert np.all(np.isfinite(out.images[1]))

    def test_nearly_black_stack_recentred(self, rng):
        # heavy underexposure; the rebuilt stack should straddle mid-tones
        stack = synth_exposures(small_radiance(rng), (-5.0, -4.0, -3.0))
        assert luminance_of(stack.images[-1]).mean() < 0.15
        out = build_enhanced_stack(stack, PipelineConfig())
        gmeans = [geometric_mean(luminance_of(img), 1e-6) for img in out.images]
        assert gmeans[0] < 0.18 < gmeans[-1]
