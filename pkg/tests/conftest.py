from importlib import resources
from pathlib import Path

import numpy as np
import pytest

ASSET_HDR_DIR = Path(str(resources.files("mefuse.assets"))) / "hdr"

GENERAL_ASSETS = ["skyline", "atrium", "terrace", "canyon", "market"]
DESK_ASSETS = ["desk-lamp", "desk-shelf", "desk-night"]


def asset_path(name: str) -> Path:
    return ASSET_HDR_DIR / f"{name}.hdr"


def random_rgb(rng, h, w):
    return rng.random((h, w, 3))


def small_radiance(rng, h=48, w=64):
    """Small synthetic radiance map with texture, highlights, and color."""
    y, x = np.mgrid[0:h, 0:w]
    base = 0.05 + 0.4 * (x / w) + 0.2 * np.sin(y / 3.0) ** 2
    hot = 40.0 * np.exp(-((y - h * 0.3) ** 2 + (x - w * 0.7) ** 2) / (0.02 * h * w))
    noise = 1.0 + 0.3 * rng.standard_normal((h, w))
    lum = np.maximum(base * np.abs(noise) + hot, 1e-4)
    return np.stack([lum * 1.0, lum * 0.8, lum * 0.6], axis=-1)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
