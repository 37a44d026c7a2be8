"""Procedural HDR radiance scenes.

These render the test/demo assets bundled under mefuse/assets/hdr.  Real
photographic radiance maps cannot be redistributed here, so the bundled
inputs are synthetic scenes with photographically plausible statistics:
broad dynamic range, hard highlights, colored surfaces, and fine texture.
Every scene is deterministic for a fixed size.

Run ``python -m mefuse.scenes --out DIR`` to rebuild the .hdr files.
"""

from __future__ import annotations

import argparse
import os

import numpy as np
from scipy import ndimage

from .hdrio import write_rgbe


def _grid(size):
    y, x = np.mgrid[0:size, 0:size]
    return y / size, x / size


def _noise(rng, size, sigma):
    n = ndimage.gaussian_filter(rng.standard_normal((size, size)), sigma, mode="wrap")
    return n / max(n.std(), 1e-12)


def _octaves(rng, size, base_sigma=48.0, octaves=5):
    acc = np.zeros((size, size))
    amp, sigma = 1.0, base_sigma
    for _ in range(octaves):
        acc += amp * _noise(rng, size, sigma)
        amp *= 0.55
        sigma = max(0.8, sigma / 2.2)
    return acc


def _tint(lum, r, g, b):
    return np.stack([lum * r, lum * g, lum * b], axis=-1)


def _blob(y, x, cy, cx, radius):
    return np.exp(-((y - cy) ** 2 + (x - cx) ** 2) / radius**2)


def skyline(size=512):
    """Sunset sky over a dark building silhouette with lit windows."""
    rng = np.random.default_rng(11)
    y, x = _grid(size)
    sky = np.exp(2.5 * (0.55 - y)) * (1.0 + 0.15 * _octaves(rng, size, 64, 4))
    sun = 260.0 * _blob(y, x, 0.22, 0.68, 0.035)
    glow = 6.0 * _blob(y, x, 0.22, 0.68, 0.25)
    horizon = 0.57 + 0.06 * np.sin(x * 23.0) * 0.2
    buildings = y > horizon + 0.04 * np.round(np.sin(x * 41.0))
    base = sky + sun + glow
    img = np.stack([base * 1.0, base * 0.62, base * 0.45], axis=-1)
    facade = 0.015 * (1.0 + 0.4 * _octaves(rng, size, 8, 3))
    img[buildings] = _tint(facade, 0.8, 0.9, 1.1)[buildings]
    windows = buildings & (np.sin(x * 320.0) > 0.86) & (np.sin(y * 260.0) > 0.6)
    lit = windows & (_noise(rng, size, 2.0) > 0.3)
    img[lit] = [14.0, 9.5, 4.0]
    return np.maximum(img, 0.0)


def atrium(size=512):
    """Dim interior hall with one very bright window wall."""
    rng = np.random.default_rng(23)
    y, x = _grid(size)
    ambient = 0.05 * (1.0 + 0.35 * _octaves(rng, size, 40, 5)) * (1.4 - y)
    floor = (y > 0.72) * (0.08 + 0.05 * np.round(np.sin(x * 60.0) * np.sin(y * 60.0)))
    window = (x > 0.62) & (x < 0.92) & (y > 0.12) & (y < 0.55)
    mullions = (np.sin(x * 140.0) > 0.93) | (np.sin(y * 110.0) > 0.93)
    pillars = (np.sin(x * 18.0) > 0.965) & (y > 0.2)
    lum = np.maximum(ambient + floor, 1e-4)
    img = _tint(lum, 0.9, 0.85, 0.8)
    spill = 2.2 * _blob(y, x, 0.35, 0.77, 0.3)
    img += _tint(spill * 0.08, 1.0, 1.0, 1.15)
    img[window & ~mullions] = [95.0, 105.0, 125.0]
    img[pillars] = [0.012, 0.012, 0.014]
    img *= 1.0 + 0.12 * _octaves(rng, size, 3, 2)[..., None]
    return np.maximum(img, 0.0)


def terrace(size=512):
    """Sunlit tiled terrace, potted plants, and a specular pond."""
    rng = np.random.default_rng(37)
    y, x = _grid(size)
    sun_dir = 0.45 + 0.8 * x + 0.3 * (1 - y)
    tiles = 0.28 + 0.12 * (((np.floor(x * 14) + np.floor(y * 14)) % 2) * 2 - 1)
    tiles *= 1.0 + 0.12 * _octaves(rng, size, 6, 3)
    lum = tiles * sun_dir
    img = _tint(lum, 1.0, 0.92, 0.8)
    plants = _noise(rng, size, 10.0) > 0.8
    img[plants] = _tint(0.1 * sun_dir * (1 + 0.5 * _octaves(rng, size, 4, 2)),
                        0.35, 0.8, 0.3)[plants]
    pond = (x - 0.3) ** 2 / 0.06 + (y - 0.75) ** 2 / 0.015 < 1.0
    ripples = 1.0 + 0.8 * np.sin(x * 200.0 + 5 * _noise(rng, size, 12.0))
    img[pond] = _tint(0.12 * ripples, 0.55, 0.75, 1.0)[pond]
    glints = pond & (_noise(rng, size, 1.2) > 2.2)
    img[glints] = [170.0, 180.0, 190.0]
    sky = y < 0.1 + 0.03 * np.sin(x * 9.0)
    img[sky] = _tint(np.full_like(lum, 7.0) * (1 + 0.1 * _octaves(rng, size, 50, 3)),
                     0.75, 0.85, 1.1)[sky]
    return np.maximum(img, 0.0)


def canyon(size=512):
    """Striated rock walls under a hard sky strip, deep shade below."""
    rng = np.random.default_rng(53)
    y, x = _grid(size)
    strata = 0.5 + 0.45 * np.sin(y * 90.0 + 6.0 * _noise(rng, size, 30.0))
    light = np.exp(-(x - 0.5) ** 2 / 0.08) * (1.1 - y) * 1.6 + 0.02
    lum = 0.2 * strata * light * (1 + 0.25 * _octaves(rng, size, 12, 4))
    img = _tint(lum, 1.05, 0.62, 0.42)
    sky = (x > 0.42) & (x < 0.58) & (y < 0.25 + 0.05 * np.sin(x * 40))
    img[sky] = [38.0, 46.0, 62.0]
    crevice = _noise(rng, size, 18.0) < -1.1
    img[crevice] *= 0.05
    return np.maximum(img, 0.0)


def market(size=512):
    """Shaded market stalls with saturated awnings and strings of lamps."""
    rng = np.random.default_rng(71)
    y, x = _grid(size)
    shade = 0.12 + 0.5 * np.clip(_octaves(rng, size, 70, 3) * 0.25 + x * 0.5, 0, 1.2)
    cloth = np.stack([
        0.22 + 0.7 * (np.sin(x * 33.0) > 0.2),
        0.2 + 0.55 * (np.sin(x * 33.0 + 2.1) > 0.3),
        0.18 + 0.5 * (np.sin(x * 33.0 + 4.2) > 0.4),
    ], axis=-1)
    img = cloth * (shade * (1 + 0.18 * _octaves(rng, size, 5, 3)))[..., None]
    crates = (y > 0.6) & (np.sin(x * 50.0) * np.sin(y * 70.0) > 0.3)
    img[crates] = _tint(0.05 + 0.04 * _octaves(rng, size, 3, 2), 1.0, 0.75, 0.5)[crates]
    ystr = 0.18 + 0.06 * np.sin(x * 12.0)
    lamps = (np.abs(y - ystr) < 0.012) & (np.sin(x * 180.0) > 0.94)
    img[lamps] = [120.0, 90.0, 45.0]
    return np.maximum(img, 0.0)


def desk_lamp(size=256):
    """Dim study desk lit by a single warm lamp pool."""
    rng = np.random.default_rng(97)
    y, x = _grid(size)
    wood = 0.3 + 0.12 * np.sin(y * 150.0 + 8.0 * _noise(rng, size, 14.0))
    wood *= 1.0 + 0.15 * _octaves(rng, size, 6, 3)
    pool = 2.6 * _blob(y, x, 0.42, 0.55, 0.22) + 0.015
    img = _tint(wood * pool, 1.0, 0.72, 0.45)
    paper = (np.abs(x - 0.52) < 0.13) & (np.abs(y - 0.55) < 0.16)
    img[paper] = _tint(0.85 * pool, 0.95, 0.93, 0.88)[paper]
    text = paper & (np.sin(y * 300.0) > 0.4) & (_noise(rng, size, 1.5) > 0.1)
    img[text] *= 0.25
    bulb = _blob(y, x, 0.2, 0.56, 0.02)
    img += _tint(60.0 * bulb, 1.0, 0.8, 0.55)
    return np.maximum(img, 0.0)


def desk_shelf(size=256):
    """Dark shelving unit with a cool monitor glow from one side."""
    rng = np.random.default_rng(101)
    y, x = _grid(size)
    boxes = 0.2 + 0.25 * (((np.floor(x * 6) * 3 + np.floor(y * 4)) % 5) / 4.0)
    boxes *= 1.0 + 0.2 * _octaves(rng, size, 10, 4)
    glow = 0.9 * np.exp(-((x - 0.1) ** 2) / 0.04) + 0.008
    img = _tint(boxes * glow * 0.12, 0.7, 0.85, 1.1)
    shelves = np.sin(y * 26.0) > 0.93
    img[shelves] = _tint(0.004 + 0 * boxes, 1, 1, 1)[shelves]
    screen = (x < 0.06) & (y > 0.3) & (y < 0.7)
    img[screen] = [8.0, 11.0, 16.0]
    spines = (np.sin(x * 90.0) > 0.5) & (y > 0.15) & (y < 0.85) & ~screen
    hue = np.stack([0.5 + 0.5 * np.sin(x * 7), 0.5 + 0.5 * np.sin(x * 7 + 2),
                    0.5 + 0.5 * np.sin(x * 7 + 4)], axis=-1)
    img[spines] = (hue * (boxes * glow * 0.3)[..., None])[spines]
    return np.maximum(img, 0.0)


def desk_night(size=256):
    """Nearly black room, one tiny bright source and faint outlines."""
    rng = np.random.default_rng(113)
    y, x = _grid(size)
    ambient = 0.003 * (1.0 + 0.5 * _octaves(rng, size, 30, 4))
    img = _tint(np.maximum(ambient, 1e-5), 0.8, 0.85, 1.0)
    edges = (np.abs(np.sin(x * 22.0)) > 0.995) | (np.abs(np.sin(y * 16.0)) > 0.995)
    img[edges] = _tint(0.01 + 0 * ambient, 0.9, 0.9, 1.0)[edges]
    led = _blob(y, x, 0.3, 0.72, 0.012)
    img += _tint(25.0 * led, 0.3, 0.9, 1.0)
    clutter = _noise(rng, size, 5.0) > 1.3
    img[clutter] = _tint(0.008 * (1 + _octaves(rng, size, 3, 2)).clip(min=0.1),
                         1.0, 0.8, 0.6)[clutter]
    return np.maximum(img, 0.0)


# name -> (render function, rendered size); the desk scenes are the dark
# interiors used by the underexposed-stack experiments
SCENES = {
    "skyline": (skyline, 512),
    "atrium": (atrium, 512),
    "terrace": (terrace, 512),
    "canyon": (canyon, 512),
    "market": (market, 512),
    "desk-lamp": (desk_lamp, 256),
    "desk-shelf": (desk_shelf, 256),
    "desk-night": (desk_night, 256),
}

GENERAL_SCENES = ("skyline", "atrium", "terrace", "canyon", "market")
DESK_SCENES = ("desk-lamp", "desk-shelf", "desk-night")


def render(name: str) -> np.ndarray:
    fn, size = SCENES[name]
    return fn(size)


def write_assets(out_dir) -> list:
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for name in SCENES:
        path = os.path.join(out_dir, f"{name}.hdr")
        with open(path, "wb") as fh:
            fh.write(write_rgbe(render(name)))
        paths.append(path)
    return paths


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Render the bundled HDR scenes")
    parser.add_argument("--out", default=os.path.join(os.path.dirname(__file__),
                                                      "assets", "hdr"))
    args = parser.parse_args(argv)
    for path in write_assets(args.out):
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
