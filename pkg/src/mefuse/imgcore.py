"""Core image containers and the luminance/statistics helpers shared by all
pipeline stages.

Images are plain float64 numpy arrays: RGB images have shape (H, W, 3) with
linear-light samples, luminance maps have shape (H, W).  LDR data lives in
[0, 1]; HDR radiance maps are unbounded above.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Rec. 709 linear-light luma coefficients.
REC709 = np.array([0.2126, 0.7152, 0.0722])


def as_float_image(img) -> np.ndarray:
    return np.ascontiguousarray(img, dtype=np.float64)


def validate_rgb(img: np.ndarray, *, ldr: bool = False, name: str = "image") -> np.ndarray:
    """Check the RGB image invariants and return the array as float64."""
    img = as_float_image(img)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"{name}: expected shape (H, W, 3), got {img.shape}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError(f"{name}: empty image")
    if not np.all(np.isfinite(img)):
        raise ValueError(f"{name}: samples must be finite")
    if np.any(img < 0):
        raise ValueError(f"{name}: samples must be non-negative")
    if ldr and np.any(img > 1):
        raise ValueError(f"{name}: LDR samples must be <= 1")
    return img


def validate_luminance(lum: np.ndarray, *, name: str = "luminance") -> np.ndarray:
    lum = as_float_image(lum)
    if lum.ndim != 2:
        raise ValueError(f"{name}: expected shape (H, W), got {lum.shape}")
    if lum.size == 0:
        raise ValueError(f"{name}: empty image")
    if not np.all(np.isfinite(lum)) or np.any(lum < 0):
        raise ValueError(f"{name}: samples must be finite and non-negative")
    return lum


def luminance_of(img: np.ndarray) -> np.ndarray:
    """Rec. 709 luminance of a linear RGB image, same spatial dimensions."""
    img = np.asarray(img, dtype=np.float64)
    return img @ REC709


def geometric_mean(lum: np.ndarray, epsilon: float) -> float:
    """Geometric mean of a luminance map with samples floored at epsilon.

    Returns exp(mean(log(max(L, epsilon)))), which is always >= epsilon.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    lum = np.asarray(lum, dtype=np.float64)
    if lum.size == 0:
        raise ValueError("geometric mean of an empty image is undefined")
    return float(np.exp(np.mean(np.log(np.maximum(lum, epsilon)))))


def restore_color(orig: np.ndarray, lum_orig: np.ndarray, lum_new: np.ndarray) -> np.ndarray:
    """Rebuild RGB by scaling each channel with the luminance ratio.

    C''(p) = (L_new(p) / L_orig(p)) * C(p), clamped to [0, 1].  Pixels with
    zero original luminance map to black (the ratio is undefined there).
    """
    orig = np.asarray(orig, dtype=np.float64)
    lum_orig = np.asarray(lum_orig, dtype=np.float64)
    lum_new = np.asarray(lum_new, dtype=np.float64)
    if orig.shape[:2] != lum_orig.shape or lum_orig.shape != lum_new.shape:
        raise ValueError(
            f"dimension mismatch: image {orig.shape[:2]}, "
            f"L_orig {lum_orig.shape}, L_new {lum_new.shape}"
        )
    ratio = np.zeros_like(lum_orig)
    nonzero = lum_orig > 0
    ratio[nonzero] = lum_new[nonzero] / lum_orig[nonzero]
    return np.clip(orig * ratio[..., None], 0.0, 1.0)


@dataclass(frozen=True)
class ExposureStack:
    """Ordered stack of LDR images, darkest first, with optional EV labels."""

    images: tuple
    evs: tuple | None = None

    def __post_init__(self):
        if len(self.images) == 0:
            raise ValueError("exposure stack needs at least one image")
        imgs = tuple(validate_rgb(im, ldr=True, name=f"stack[{i}]")
                     for i, im in enumerate(self.images))
        object.__setattr__(self, "images", imgs)
        first = imgs[0].shape
        for i, im in enumerate(imgs[1:], start=1):
            if im.shape != first:
                raise ValueError(
                    f"dimension mismatch in stack: image 0 is {first[:2]}, "
                    f"image {i} is {im.shape[:2]}"
                )
        if self.evs is not None:
            evs = tuple(float(v) for v in self.evs)
            if len(evs) != len(imgs):
                raise ValueError("one EV label per image required")
            if any(a >= b for a, b in zip(evs, evs[1:])):
                raise ValueError("EV labels must be strictly increasing")
            object.__setattr__(self, "evs", evs)

    @property
    def n(self) -> int:
        return len(self.images)

    @property
    def height(self) -> int:
        return self.images[0].shape[0]

    @property
    def width(self) -> int:
        return self.images[0].shape[1]


@dataclass(frozen=True)
class PipelineConfig:
    """Tuning knobs for the enhancement + fusion pipeline."""

    sigma_spatial: float = 16.0
    sigma_range: float = 3.0 / 255.0
    key: float = 0.18
    epsilon: float = 1e-6
    ev_offsets: tuple = (-1.0, 0.0, 1.0)
    backend: str = "mertens"
    pyramid_depth: int | None = None  # None selects floor(log2(min(w, h)))

    def __post_init__(self):
        if self.sigma_spatial <= 0:
            raise ValueError("sigma_spatial must be positive")
        if self.sigma_range <= 0:
            raise ValueError("sigma_range must be positive")
        if not 0 < self.key < 1:
            raise ValueError("key must lie in (0, 1)")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        object.__setattr__(self, "ev_offsets", tuple(float(v) for v in self.ev_offsets))
        if self.pyramid_depth is not None and self.pyramid_depth < 1:
            raise ValueError("pyramid_depth must be >= 1")
