"""Independent reference implementations used to pin expected values.

These deliberately stay naive (literal sums, per-pixel loops) so the tests
do not share code paths with the library's optimised routines.
"""

import math

import numpy as np


def bilateral_reference(lum, sigma_spatial, sigma_range):
    """Literal double-loop evaluation of the bilateral filter definition.

    For every pixel, sums spatial * range Gaussian weights over the window
    of radius ceil(2 * sigma_spatial), clipped at the image border.
    """
    h, w = lum.shape
    radius = math.ceil(2.0 * sigma_spatial)
    out = np.empty_like(lum, dtype=np.float64)
    for y in range(h):
        for x in range(w):
            y0, y1 = max(y - radius, 0), min(y + radius, h - 1)
            x0, x1 = max(x - radius, 0), min(x + radius, w - 1)
            win = lum[y0:y1 + 1, x0:x1 + 1]
            yy, xx = np.mgrid[y0:y1 + 1, x0:x1 + 1]
            spatial = np.exp(-((yy - y) ** 2 + (xx - x) ** 2) / sigma_spatial ** 2)
            rangew = np.exp(-((win - lum[y, x]) ** 2) / sigma_range ** 2)
            weights = spatial * rangew
            out[y, x] = float((weights * win).sum() / weights.sum())
    return out


def weighted_average_fuse(images, weights):
    """Per-pixel weighted average, the depth-1 fusion reference."""
    acc = np.zeros_like(images[0], dtype=np.float64)
    for img, wmap in zip(images, weights):
        acc += img * wmap[..., None]
    return acc


def scalar_entropy(counts):
    """Shannon entropy in bits of a histogram given as raw counts."""
    total = sum(counts)
    h = 0.0
    for c in counts:
        if c > 0:
            p = c / total
            h -= p * math.log2(p)
    return h
