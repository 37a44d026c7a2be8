"""Per-image exposure gain estimation.

The middle stack member is anchored so that the geometric mean of its
enhanced luminance lands on middle gray; every other member's target mean
sits a whole EV (factor of two) per step above or below that anchor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imgcore import geometric_mean


def middle_index(n: int) -> int:
    """1-based index of the middle-brightness image: ceil((N+1)/2)."""
    if n < 1:
        raise ValueError("stack must contain at least one image")
    return (n + 2) // 2


@dataclass(frozen=True)
class AlphaVector:
    """Estimated gains, their 1-based anchor index, and the target means."""

    alphas: tuple
    middle: int
    targets: tuple

    def __post_init__(self):
        if any(a <= 0 for a in self.alphas):
            raise ValueError("gains must be positive")
        if self.middle != middle_index(len(self.alphas)):
            raise ValueError("middle index inconsistent with stack size")


def estimate_alphas(enhanced_lums, key: float, epsilon: float) -> AlphaVector:
    """Gains alpha_k = key * 2^(k-j) / gmean(L_k) with j the middle index.

    Scaling by 2^(k-j) is exact in floating point, so consecutive target
    means differ by a factor of two exactly.
    """
    lums = list(enhanced_lums)
    if not lums:
        raise ValueError("stack must contain at least one luminance map")
    if not 0 < key < 1:
        raise ValueError("key must lie in (0, 1)")
    j = middle_index(len(lums))
    targets = []
    alphas = []
    for k, lum in enumerate(lums, start=1):
        target = key * 2.0 ** (k - j)
        gbar = geometric_mean(lum, epsilon)
        targets.append(target)
        alphas.append(target / gbar)
    return AlphaVector(alphas=tuple(alphas), middle=j, targets=tuple(targets))


def compensate(lum: np.ndarray, alpha: float) -> np.ndarray:
    """Scale a luminance map by a positive gain; values may exceed 1."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return np.asarray(lum, dtype=np.float64) * alpha
