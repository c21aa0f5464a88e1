"""Seeded synthetic image/mask generation and label corruption.

Images are unions of random axis-aligned ellipses on a darker
background, with optional Gaussian pixel noise. Generation is a pure
function of the config: the random stream and the order of draws are
pinned (see :func:`generate`), so the same config reproduces the same
dataset byte for byte.

Label corruption simulates systematic annotation bias by eroding
(under-segmentation) or dilating (over-segmentation) the masks; it is
meant for training labels only, evaluation should always use the
original masks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .morphology import StructuringElement, dilate, erode, iterate, square
from .raster import _frozen
from .rng import Xoshiro256StarStar

__all__ = ["SynthConfig", "DatasetItem", "generate", "draw_mask", "corrupt"]

_MARGIN = 4.0
_MAX_REDRAWS = 10
_FG_FRACTION_MAX = 0.6


@dataclass(frozen=True)
class SynthConfig:
    seed: int
    count: int
    width: int
    height: int
    shapes_per_image: tuple = (1, 3)
    fg_mean: float = 0.7
    bg_mean: float = 0.3
    noise_sd: float = 0.1

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.width <= 2 * _MARGIN or self.height <= 2 * _MARGIN:
            raise ValueError(f"image sides must exceed {2 * _MARGIN:g} pixels")
        lo, hi = self.shapes_per_image
        if not (1 <= lo <= hi):
            raise ValueError("shapes_per_image must satisfy 1 <= lo <= hi")
        for v in (self.fg_mean, self.bg_mean):
            if not (0.0 <= v <= 1.0):
                raise ValueError("intensity means must lie in [0, 1]")
        if self.fg_mean <= self.bg_mean:
            raise ValueError("fg_mean must exceed bg_mean")
        if self.noise_sd < 0.0:
            raise ValueError("noise_sd must be >= 0")


@dataclass(frozen=True)
class DatasetItem:
    image: np.ndarray
    mask: np.ndarray
    image_id: str


def draw_mask(rng: Xoshiro256StarStar, config: SynthConfig) -> np.ndarray:
    """Draw one ellipse-union mask, consuming stream draws in this order:

    1. k = uniform_int(lo, hi) ellipses,
    2. per ellipse: centre-x, centre-y, semi-axis-a, semi-axis-b
       (four uniforms; centres keep a 4-pixel margin, semi-axes are
       uniform in [width/10, width/4]).

    A mask whose foreground fraction falls outside (0, 0.6) is rejected
    and all its draws re-taken, at most 10 re-draws before failing.
    """
    w, h = config.width, config.height
    lo, hi = config.shapes_per_image
    xs = np.arange(w, dtype=np.float64)[None, :]
    ys = np.arange(h, dtype=np.float64)[:, None]
    for _ in range(1 + _MAX_REDRAWS):
        k = rng.uniform_int(lo, hi)
        acc = np.zeros((h, w), dtype=bool)
        for _ in range(k):
            cx = _MARGIN + rng.uniform() * (w - 2 * _MARGIN)
            cy = _MARGIN + rng.uniform() * (h - 2 * _MARGIN)
            a = w / 10 + rng.uniform() * (w / 4 - w / 10)
            b = w / 10 + rng.uniform() * (w / 4 - w / 10)
            acc |= ((xs - cx) / a) ** 2 + ((ys - cy) / b) ** 2 <= 1.0
        frac = acc.mean()
        if 0.0 < frac < _FG_FRACTION_MAX:
            return _frozen(acc.astype(np.uint8))
    raise ValueError(
        f"mask foreground fraction stayed outside (0, {_FG_FRACTION_MAX}) "
        f"after {_MAX_REDRAWS} re-draws"
    )


def generate(config: SynthConfig) -> list:
    """Generate ``config.count`` (image, mask, id) items, deterministic
    from the seed.

    One xoshiro256** stream seeded with ``config.seed`` feeds the whole
    dataset. Items are produced in index order; per item the mask draws
    come first (see :func:`draw_mask`), then one Gaussian noise draw per
    pixel in row-major order (two uniforms each). When ``noise_sd`` is 0
    the noise draws are skipped entirely. Images are
    bg_mean + (fg_mean - bg_mean) * mask + noise, clamped to [0, 1].
    """
    rng = Xoshiro256StarStar(config.seed)
    w, h = config.width, config.height
    items = []
    for index in range(config.count):
        mask = draw_mask(rng, config)
        img = config.bg_mean + (config.fg_mean - config.bg_mean) * mask.astype(
            np.float64
        )
        if config.noise_sd > 0.0:
            noise = np.array(
                [rng.normal() for _ in range(h * w)], dtype=np.float64
            ).reshape(h, w)
            img += config.noise_sd * noise
        np.clip(img, 0.0, 1.0, out=img)
        items.append(DatasetItem(_frozen(img), mask, f"{index:03d}"))
    return items


def corrupt(mask, kind: str, k: int, se: StructuringElement = square(3)) -> np.ndarray:
    """Simulate systematic segmentation error on a label mask.

    ``under`` erodes k times (never adds foreground), ``over`` dilates
    k times (never removes it).
    """
    if k < 1:
        raise ValueError("corruption strength k must be >= 1")
    if kind == "under":
        return iterate(erode, mask, se, k)
    if kind == "over":
        return iterate(dilate, mask, se, k)
    raise ValueError(f"unknown corruption kind {kind!r}")
