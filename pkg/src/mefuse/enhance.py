"""Local contrast enhancement: dodging and burning against a bilateral
local average of the luminance.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .imgcore import ExposureStack, PipelineConfig, luminance_of, validate_luminance
from . import _bilateral_np

try:
    from . import _native
except ImportError:  # pure-Python install; fall back to the numpy kernel
    _native = None

HAVE_COMPILED = _native is not None


def worker_threads() -> int:
    """Worker cap from MEFUSE_THREADS, defaulting to the CPU count."""
    env = os.environ.get("MEFUSE_THREADS", "").strip()
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise ValueError(f"MEFUSE_THREADS must be an integer, got {env!r}") from exc
        if n < 1:
            raise ValueError("MEFUSE_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def window_radius(sigma_spatial: float) -> int:
    """Truncation radius of the spatial window: ceil(2 * sigma)."""
    return int(math.ceil(2.0 * sigma_spatial))


def bilateral_filter(lum: np.ndarray, sigma_spatial: float, sigma_range: float,
                     *, impl: str | None = None, threads: int | None = None) -> np.ndarray:
    """Edge-preserving local average of a luminance map.

    Neighbour weights are exp(-(dx^2+dy^2)/sigma_spatial^2) *
    exp(-(dL)^2/sigma_range^2), summed over a window of radius
    ceil(2*sigma_spatial) clipped at the borders.  The output is bounded by
    the input extrema.

    impl selects the backend: "compiled", "numpy", or None for the fastest
    available.  threads caps the compiled kernel's parallelism (defaults to
    MEFUSE_THREADS / CPU count).
    """
    lum = validate_luminance(lum)
    if sigma_spatial <= 0 or sigma_range <= 0:
        raise ValueError("sigma_spatial and sigma_range must be positive")
    radius = window_radius(sigma_spatial)
    if impl is None:
        impl = "compiled" if HAVE_COMPILED else "numpy"
    if impl == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled kernel not available in this build")
        nthreads = threads if threads is not None else worker_threads()
        return _native.bilateral(lum, float(sigma_spatial), float(sigma_range),
                                 radius, int(nthreads))
    if impl == "numpy":
        return _bilateral_np.bilateral(lum, float(sigma_spatial), float(sigma_range), radius)
    raise ValueError(f"unknown bilateral implementation {impl!r}")


def dodge_burn(lum: np.ndarray, local_avg: np.ndarray, epsilon: float = 1e-6) -> np.ndarray:
    """Contrast-enhanced luminance L^2 / L_avg.

    Where the local average is <= epsilon the ratio is ill-conditioned and
    the input value is kept unchanged.
    """
    lum = np.asarray(lum, dtype=np.float64)
    local_avg = np.asarray(local_avg, dtype=np.float64)
    if lum.shape != local_avg.shape:
        raise ValueError(
            f"dimension mismatch: luminance {lum.shape}, local average {local_avg.shape}"
        )
    safe = local_avg > epsilon
    out = lum.copy()
    out[safe] = lum[safe] * lum[safe] / local_avg[safe]
    return out


def enhance_stack(stack: ExposureStack, cfg: PipelineConfig, *,
                  impl: str | None = None) -> list:
    """Enhanced luminance maps for every stack member, in stack order."""
    out = []
    for img in stack.images:
        lum = luminance_of(img)
        avg = bilateral_filter(lum, cfg.sigma_spatial, cfg.sigma_range, impl=impl)
        out.append(dodge_burn(lum, avg, cfg.epsilon))
    return out
