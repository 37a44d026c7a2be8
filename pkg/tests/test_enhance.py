import numpy as np
import pytest

from mefuse.enhance import (
    HAVE_COMPILED,
    bilateral_filter,
    dodge_burn,
    enhance_stack,
    window_radius,
    worker_threads,
)
from mefuse.imgcore import ExposureStack, PipelineConfig, luminance_of

from oracles import bilateral_reference

IMPLS = ["numpy"] + (["compiled"] if HAVE_COMPILED else [])

needs_compiled = pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernel not built")


def test_window_radius():
    assert window_radius(16.0) == 32
    assert window_radius(0.4) == 1


@pytest.mark.parametrize("impl", IMPLS)
class TestBilateral:
    def test_constant_is_fixed_point(self, impl):
        lum = np.full((9, 13), 0.37)
        out = bilateral_filter(lum, 16.0, 3 / 255, impl=impl)
        assert np.allclose(out, 0.37, rtol=1e-12)

    def test_single_pixel(self, impl):
        lum = np.array([[0.61]])
        out = bilateral_filter(lum, 16.0, 3 / 255, impl=impl)
        assert out.shape == (1, 1)
        assert out[0, 0] == pytest.approx(0.61, rel=1e-12)

    def test_matches_reference_random(self, impl, rng):
        for _ in range(5):
            lum = rng.random((32, 32))
            out = bilateral_filter(lum, 16.0, 3 / 255, impl=impl)
            ref = bilateral_reference(lum, 16.0, 3 / 255)
            assert np.max(np.abs(out - ref)) <= 1e-6

    def test_matches_reference_structured(self, impl, rng):
        # piecewise-constant plus smooth ramp exercises both kernel terms
        lum = np.tile(np.linspace(0.1, 0.9, 24), (18, 1))
        lum[6:, 8:] = 0.2
        out = bilateral_filter(lum, 4.0, 0.1, impl=impl)
        ref = bilateral_reference(lum, 4.0, 0.1)
        assert np.max(np.abs(out - ref)) <= 1e-6

    def test_matches_reference_window_clipped(self, impl, rng):
        # 64x64 at sigma 16: the radius-32 window no longer covers the frame
        lum = rng.random((64, 64))
        out = bilateral_filter(lum, 16.0, 3 / 255, impl=impl)
        ref = bilateral_reference(lum, 16.0, 3 / 255)
        assert np.max(np.abs(out - ref)) <= 1e-6

    def test_output_bounded_by_extrema(self, impl, rng):
        lum = rng.random((40, 25)) * 0.7 + 0.1
        out = bilateral_filter(lum, 6.0, 0.05, impl=impl)
        assert out.min() >= lum.min() - 1e-12
        assert out.max() <= lum.max() + 1e-12

    def test_rejects_bad_sigma(self, impl):
        with pytest.raises(ValueError):
            bilateral_filter(np.ones((4, 4)), 0.0, 0.1, impl=impl)
        with pytest.raises(ValueError):
            bilateral_filter(np.ones((4, 4)), 1.0, 0.0, impl=impl)


@needs_compiled
def test_compiled_agrees_with_numpy(rng):
    lum = rng.random((48, 31))
    a = bilateral_filter(lum, 5.0, 0.02, impl="compiled")
    b = bilateral_filter(lum, 5.0, 0.02, impl="numpy")
    assert np.max(np.abs(a - b)) < 1e-9


@needs_compiled
def test_thread_count_does_not_change_result(rng):
    # per-pixel outputs are computed independently, so parallelism must not
    # perturb a single bit
    lum = rng.random((64, 48))
    one = bilateral_filter(lum, 16.0, 3 / 255, impl="compiled", threads=1)
    many = bilateral_filter(lum, 16.0, 3 / 255, impl="compiled", threads=4)
    assert np.array_equal(one, many)


@pytest.mark.parametrize("shape", [(40, 24), (24, 40)])
def test_matches_reference_asymmetric_clipping(rng, shape):
    # radius 32 exceeds one dimension only: border handling must stay exact
    lum = rng.random(shape)
    for impl in IMPLS:
        out = bilateral_filter(lum, 16.0, 3 / 255, impl=impl)
        ref = bilateral_reference(lum, 16.0, 3 / 255)
        assert np.max(np.abs(out - ref)) <= 1e-6


def test_unknown_impl_rejected():
    with pytest.raises(ValueError, match="unknown bilateral implementation"):
        bilateral_filter(np.ones((4, 4)), 1.0, 1.0, impl="cuda")


class TestDodgeBurn:
    def test_flat_region_unchanged(self):
        lum = np.full((5, 5), 0.3)
        assert np.allclose(dodge_burn(lum, lum), 0.3, rtol=1e-12)

    def test_zero_luminance_stays_zero(self):
        lum = np.zeros((3, 3))
        out = dodge_burn(lum, np.full((3, 3), 0.5))
        assert np.all(out == 0.0)

    def test_direct_substitution(self):
        out = dodge_burn(np.array([[0.5]]), np.array([[0.25]]))
        assert out[0, 0] == pytest.approx(1.0, rel=1e-12)

    def test_filter_fixed_point_is_identity(self, rng):
        lum = rng.random((6, 6))
        assert np.allclose(dodge_burn(lum, lum), lum, rtol=1e-12)

    def test_low_average_falls_back_to_input(self):
        lum = np.array([[0.4, 0.4]])
        avg = np.array([[1e-9, 0.2]])
        out = dodge_burn(lum, avg, epsilon=1e-6)
        assert out[0, 0] == 0.4            # guard: keep input
        assert out[0, 1] == pytest.approx(0.8)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            dodge_burn(np.ones((2, 3)), np.ones((3, 2)))


class TestEnhanceStack:
    def test_constant_stack(self):
        img = np.full((8, 8, 3), 0.5)
        stack = ExposureStack(images=(img,))
        maps = enhance_stack(stack, PipelineConfig())
        assert len(maps) == 1
        assert np.allclose(maps[0], 0.5, rtol=1e-12)

    def test_structure_preserved(self, rng):
        imgs = tuple(rng.random((10, 12, 3)) for _ in range(3))
        maps = enhance_stack(ExposureStack(images=imgs), PipelineConfig())
        assert len(maps) == 3
        for m, img in zip(maps, imgs):
            assert m.shape == (10, 12)

    def test_step_edge_contrast_grows(self):
        # left half 0.2, right half 0.8; verified against the naive filter
        img = np.empty((16, 16, 3))
        img[:, :8] = 0.2
        img[:, 8:] = 0.8
        stack = ExposureStack(images=(img,))
        cfg = PipelineConfig()
        out = enhance_stack(stack, cfg)[0]

        lum = luminance_of(img)
        ref_avg = bilateral_reference(lum, cfg.sigma_spatial, cfg.sigma_range)
        ref = lum * lum / ref_avg
        assert np.max(np.abs(out - ref)) <= 1e-6

        in_ratio = lum[:, 8:].mean() / lum[:, :8].mean()
        out_ratio = out[:, 8:].mean() / out[:, :8].mean()
        assert out_ratio >= in_ratio - 1e-9


class TestWorkerThreads:
    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("MEFUSE_THREADS", "3")
        assert worker_threads() == 3

    def test_default_positive(self, monkeypatch):
        monkeypatch.delenv("MEFUSE_THREADS", raising=False)
        assert worker_threads() >= 1

    @pytest.mark.parametrize("value", ["zero", "0", "-2"])
    def test_invalid_rejected(self, monkeypatch, value):
        monkeypatch.setenv("MEFUSE_THREADS", value)
        with pytest.raises(ValueError):
            worker_threads()
