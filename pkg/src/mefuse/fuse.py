"""Multi-scale exposure fusion of an LDR stack.

The default backend follows Mertens-style exposure fusion: per-pixel quality
weights (contrast x saturation x well-exposedness) blended across a
Laplacian pyramid of the images against a Gaussian pyramid of the weights.
The backend registry keeps fusion pluggable behind a stack-in, image-out
interface.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

from .imgcore import ExposureStack, PipelineConfig, luminance_of

# Burt-Adelson 5-tap binomial kernel.
_PYR_KERNEL = np.array([1.0, 4.0, 6.0, 4.0, 1.0]) / 16.0

# Mertens weight settings: unit exponents, well-exposedness Gaussian around
# mid-gray, and a floor that keeps the per-pixel normalisation defined.
WELL_EXPOSED_SIGMA = 0.2
WEIGHT_FLOOR = 1e-12


def contrast_measure(img: np.ndarray) -> np.ndarray:
    """Absolute discrete Laplacian of the grayscale rendering."""
    return np.abs(ndimage.laplace(luminance_of(img), mode="reflect"))


def saturation_measure(img: np.ndarray) -> np.ndarray:
    """Per-pixel standard deviation across the three channels."""
    return np.asarray(img, dtype=np.float64).std(axis=2)


def well_exposedness(img: np.ndarray) -> np.ndarray:
    """Product over channels of a Gaussian preference for mid-range values."""
    img = np.asarray(img, dtype=np.float64)
    return np.exp(-((img - 0.5) ** 2).sum(axis=2) / (2.0 * WELL_EXPOSED_SIGMA ** 2))


def quality_weights(stack: ExposureStack) -> np.ndarray:
    """Per-image weight maps, shape (N, H, W), summing to 1 at every pixel."""
    weights = [
        contrast_measure(img) * saturation_measure(img) * well_exposedness(img)
        + WEIGHT_FLOOR
        for img in stack.images
    ]
    w = np.stack(weights, axis=0)
    return w / w.sum(axis=0)


def _blur(arr: np.ndarray) -> np.ndarray:
    """Separable binomial blur over the two spatial axes, borders clamped."""
    out = ndimage.correlate1d(arr, _PYR_KERNEL, axis=0, mode="nearest")
    return ndimage.correlate1d(out, _PYR_KERNEL, axis=1, mode="nearest")


def _down(arr: np.ndarray) -> np.ndarray:
    """Blur then drop every other sample; sizes halve with ceiling."""
    return _blur(arr)[::2, ::2]


def _up_axis(arr: np.ndarray, n_out: int, axis: int) -> np.ndarray:
    arr = np.moveaxis(arr, axis, 0)
    m = arr.shape[0]
    out = np.empty((n_out,) + arr.shape[1:], dtype=arr.dtype)
    idx = np.arange((n_out + 1) // 2)
    below = np.clip(idx - 1, 0, m - 1)
    above = np.clip(idx + 1, 0, m - 1)
    out[0::2] = (arr[below] + 6.0 * arr[idx] + arr[above]) / 8.0
    idx = np.arange(n_out // 2)
    nxt = np.clip(idx + 1, 0, m - 1)
    out[1::2] = (arr[idx] + arr[nxt]) / 2.0
    return np.moveaxis(out, 0, axis)


def _up(arr: np.ndarray, shape) -> np.ndarray:
    """Smooth upsample to the given (H, W), the inverse step of _down."""
    out = _up_axis(arr, shape[0], axis=0)
    return _up_axis(out, shape[1], axis=1)


def max_depth(width: int, height: int) -> int:
    """Deepest usable pyramid: floor(log2(min(w, h))), at least 1."""
    return max(1, int(math.floor(math.log2(min(width, height)))))


def gaussian_pyramid(arr: np.ndarray, depth: int) -> list:
    levels = [np.asarray(arr, dtype=np.float64)]
    for _ in range(depth - 1):
        levels.append(_down(levels[-1]))
    return levels


def laplacian_pyramid(arr: np.ndarray, depth: int) -> list:
    gauss = gaussian_pyramid(arr, depth)
    levels = [
        gauss[k] - _up(gauss[k + 1], gauss[k].shape[:2])
        for k in range(depth - 1)
    ]
    levels.append(gauss[-1])
    return levels


def collapse_pyramid(levels) -> np.ndarray:
    acc = levels[-1]
    for lap in reversed(levels[:-1]):
        acc = lap + _up(acc, lap.shape[:2])
    return acc


def _check_depth(depth: int, width: int, height: int) -> None:
    if depth < 1:
        raise ValueError("pyramid depth must be >= 1")
    if depth > max_depth(width, height):
        raise ValueError(
            f"pyramid depth {depth} exceeds floor(log2(min(w, h))) = "
            f"{max_depth(width, height)} for a {width}x{height} image"
        )


def pyramid_fuse(stack: ExposureStack, weights: np.ndarray, depth: int) -> np.ndarray:
    """Blend Laplacian pyramids of the images with Gaussian pyramids of the
    weights, collapse, and clamp to [0, 1].  depth=1 degenerates to the
    per-pixel weighted average.
    """
    _check_depth(depth, stack.width, stack.height)
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (stack.n, stack.height, stack.width):
        raise ValueError(
            f"weights shape {weights.shape} does not match stack "
            f"({stack.n}, {stack.height}, {stack.width})"
        )
    fused = None
    for img, wmap in zip(stack.images, weights):
        img_pyr = laplacian_pyramid(img, depth)
        w_pyr = gaussian_pyramid(wmap, depth)
        blended = [lap * w[..., None] for lap, w in zip(img_pyr, w_pyr)]
        if fused is None:
            fused = blended
        else:
            fused = [a + b for a, b in zip(fused, blended)]
    return np.clip(collapse_pyramid(fused), 0.0, 1.0)


def mertens_fuse(stack: ExposureStack, depth: int | None = None) -> np.ndarray:
    if depth is None:
        depth = max_depth(stack.width, stack.height)
    return pyramid_fuse(stack, quality_weights(stack), depth)


BACKENDS = {"mertens": mertens_fuse}


def fuse(stack: ExposureStack, cfg: PipelineConfig) -> np.ndarray:
    """Fuse an LDR stack with the configured backend; output is LDR-valid."""
    try:
        backend = BACKENDS[cfg.backend]
    except KeyError:
        known = ", ".join(sorted(BACKENDS))
        raise ValueError(f"unknown fusion backend {cfg.backend!r} (available: {known})")
    return backend(stack, depth=cfg.pyramid_depth)
