"""No-reference quality scores: discrete entropy and statistical naturalness.

Both operate on the Rec. 709 grayscale rendering of an LDR image.  The
naturalness score follows the TMQI construction: a Gaussian prior on global
brightness and a Beta prior on mean local contrast, each normalised by its
mode so the product lies in [0, 1].
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from scipy import stats

from .imgcore import luminance_of, validate_rgb

# Brightness prior N(mu, sigma) and contrast prior Beta(a, b) on d / D_SCALE,
# with the contrast measured as the mean 11x11 local standard deviation.
BRIGHTNESS_MEAN = 115.94
BRIGHTNESS_STD = 27.99
CONTRAST_ALPHA = 4.4
CONTRAST_BETA = 10.1
CONTRAST_SCALE = 64.29
STD_WINDOW = 11

CSV_HEADER = "image_id,method_id,entropy_bits,naturalness"


def _gray255(img: np.ndarray) -> np.ndarray:
    """Grayscale on the 8-bit scale, kept continuous."""
    return luminance_of(img) * 255.0


def discrete_entropy(img: np.ndarray) -> float:
    """Shannon entropy in bits of the 256-bin grayscale histogram.

    Grayscale levels are quantised by rounding half up, matching the file
    encoder, so entropy is at most 8 bits.
    """
    img = validate_rgb(img, ldr=True)
    levels = np.floor(_gray255(img) + 0.5).astype(np.int64)
    counts = np.bincount(levels.ravel(), minlength=256)
    p = counts[counts > 0] / levels.size
    return float(-(p * np.log2(p)).sum()) + 0.0  # avoid -0.0 on flat images


def local_contrast(gray255: np.ndarray, window: int = STD_WINDOW) -> float:
    """Mean over pixels of the local standard deviation in square windows.

    Borders are extended symmetrically so the statistic is invariant under
    horizontal and vertical flips.
    """
    # Centre the data first: the naive E[x^2] - E[x]^2 form loses digits at
    # the 0..255 scale.
    centred = gray255 - gray255.mean()
    mean = ndimage.uniform_filter(centred, size=window, mode="reflect")
    mean_sq = ndimage.uniform_filter(centred * centred, size=window, mode="reflect")
    var = np.maximum(mean_sq - mean * mean, 0.0)
    return float(np.sqrt(var).mean())


def statistical_naturalness(img: np.ndarray) -> float:
    """TMQI statistical naturalness in [0, 1]; 1 at the priors' joint mode."""
    img = validate_rgb(img, ldr=True)
    h, w = img.shape[:2]
    if min(h, w) < STD_WINDOW:
        raise ValueError(
            f"image {w}x{h} is smaller than the {STD_WINDOW}x{STD_WINDOW} contrast window"
        )
    gray = _gray255(img)
    m = float(gray.mean())
    d = float(local_contrast(gray))
    p_m = stats.norm.pdf(m, BRIGHTNESS_MEAN, BRIGHTNESS_STD)
    p_m_max = stats.norm.pdf(BRIGHTNESS_MEAN, BRIGHTNESS_MEAN, BRIGHTNESS_STD)
    mode = (CONTRAST_ALPHA - 1.0) / (CONTRAST_ALPHA + CONTRAST_BETA - 2.0)
    p_d = stats.beta.pdf(d / CONTRAST_SCALE, CONTRAST_ALPHA, CONTRAST_BETA)
    p_d_max = stats.beta.pdf(mode, CONTRAST_ALPHA, CONTRAST_BETA)
    return float((p_m / p_m_max) * (p_d / p_d_max))


@dataclass(frozen=True)
class MetricsReport:
    image_id: str
    method_id: str
    entropy_bits: float
    naturalness: float


def score_report(images, method_id: str = "") -> list:
    """One report row per (label, image) pair, in input order."""
    rows = []
    for label, img in images:
        rows.append(MetricsReport(
            image_id=str(label),
            method_id=method_id,
            entropy_bits=discrete_entropy(img),
            naturalness=statistical_naturalness(img),
        ))
    if not rows:
        raise ValueError("no images to score")
    return rows


def write_csv(reports, stream: io.TextIOBase) -> None:
    """Emit the fixed CSV schema with 6-decimal numeric formatting."""
    stream.write(CSV_HEADER + "\n")
    for r in reports:
        stream.write(
            f"{r.image_id},{r.method_id},{r.entropy_bits:.6f},{r.naturalness:.6f}\n"
        )
