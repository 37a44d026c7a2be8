"""Pure-numpy bilateral filter, used when the compiled core is unavailable.

Accumulates one window offset at a time over the whole image, so the cost is
O(pixels * window_area) with numpy-vectorised inner passes.
"""

from __future__ import annotations

import math

import numpy as np

# Matches the compiled kernel: taps whose range exponent exceeds this weigh
# under 1e-13 against a centre-tap weight of 1.
RANGE_EXP_CUTOFF = 30.0


def bilateral(lum: np.ndarray, sigma_spatial: float, sigma_range: float,
              radius: int) -> np.ndarray:
    if sigma_spatial <= 0 or sigma_range <= 0:
        raise ValueError("sigma_spatial and sigma_range must be positive")
    h, w = lum.shape
    inv_sp2 = 1.0 / (sigma_spatial * sigma_spatial)
    inv_rg2 = 1.0 / (sigma_range * sigma_range)
    num = np.zeros((h, w))
    den = np.zeros((h, w))
    for dy in range(-radius, radius + 1):
        if abs(dy) >= h:
            continue
        ys = slice(max(0, -dy), h - max(0, dy))      # centre rows with q in range
        yq = slice(max(0, dy), h + min(0, dy))       # neighbour rows
        for dx in range(-radius, radius + 1):
            if abs(dx) >= w:
                continue
            xs = slice(max(0, -dx), w - max(0, dx))
            xq = slice(max(0, dx), w + min(0, dx))
            spatial = math.exp(-(dx * dx + dy * dy) * inv_sp2)
            neighbour = lum[yq, xq]
            d = neighbour - lum[ys, xs]
            u = np.minimum(d * d * inv_rg2, RANGE_EXP_CUTOFF)
            wgt = spatial * np.exp(-u)
            num[ys, xs] += wgt * neighbour
            den[ys, xs] += wgt
    return num / den
