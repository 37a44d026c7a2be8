"""Range compression of compensated luminance and RGB reassembly.

Reinhard's global operator with a per-image white point guarantees the
output luminance stays in [0, 1] with the maximum mapped exactly to 1, so
no values are lost to truncation.
"""

from __future__ import annotations

import numpy as np

from .compensate import compensate, estimate_alphas
from .enhance import enhance_stack
from .imgcore import ExposureStack, PipelineConfig, luminance_of, restore_color


def reinhard_global(lum: np.ndarray, white_point: float) -> np.ndarray:
    """F(L) = L * (1 + L / Lw^2) / (1 + L); monotone, F(0)=0, F(Lw)=1."""
    if white_point <= 0:
        raise ValueError("white point must be positive")
    lum = np.asarray(lum, dtype=np.float64)
    return lum * (1.0 + lum / (white_point * white_point)) / (1.0 + lum)


def tonemap_stack(compensated_lums) -> list:
    """Tone map each member against its own maximum.

    All-black maps are passed through unchanged (no white point exists).
    """
    out = []
    for lum in compensated_lums:
        lum = np.asarray(lum, dtype=np.float64)
        white = float(lum.max())
        if white == 0.0:
            out.append(lum.copy())
        else:
            out.append(reinhard_global(lum, white))
    return out


def build_enhanced_stack(stack: ExposureStack, cfg: PipelineConfig, *,
                         impl: str | None = None) -> ExposureStack:
    """Full enhancement chain: contrast enhancement, exposure compensation,
    tone mapping, and color restoration against the original luminance.
    """
    orig_lums = [luminance_of(img) for img in stack.images]
    enhanced = enhance_stack(stack, cfg, impl=impl)
    gains = estimate_alphas(enhanced, cfg.key, cfg.epsilon)
    compensated = [compensate(lum, a) for lum, a in zip(enhanced, gains.alphas)]
    mapped = tonemap_stack(compensated)
    images = [
        restore_color(img, lum_orig, lum_new)
        for img, lum_orig, lum_new in zip(stack.images, orig_lums, mapped)
    ]
    return ExposureStack(images=tuple(images), evs=stack.evs)
