"""Flat structuring-element binary dilation and erosion.

Dilation takes the neighbourhood maximum, erosion the neighbourhood
minimum, with the neighbourhood described by a flat (zero-weight)
structuring element. The border policy is fixed: dilation pads with
background (0), erosion pads with foreground (1), so the image frame
never manufactures bands at the edges; only object boundaries inside
the frame do.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .raster import _frozen

__all__ = ["StructuringElement", "square", "cross", "dilate", "erode", "iterate"]


@dataclass(frozen=True)
class StructuringElement:
    """A flat neighbourhood given as a set of (row, col) offsets.

    Must be non-empty, contain the origin and be point-symmetric
    ((i, j) present iff (-i, -j) present), which forces an odd-sided
    bounding box.
    """

    offsets: frozenset
    ri: int = field(init=False, compare=False)
    rj: int = field(init=False, compare=False)
    is_box: bool = field(init=False, compare=False)

    def __post_init__(self):
        offs = frozenset((int(i), int(j)) for i, j in self.offsets)
        object.__setattr__(self, "offsets", offs)
        if not offs:
            raise ValueError("structuring element must be non-empty")
        if (0, 0) not in offs:
            raise ValueError("structuring element must contain the origin")
        for i, j in offs:
            if (-i, -j) not in offs:
                raise ValueError("structuring element must be point-symmetric")
        ri = max(abs(i) for i, _ in offs)
        rj = max(abs(j) for _, j in offs)
        object.__setattr__(self, "ri", ri)
        object.__setattr__(self, "rj", rj)
        object.__setattr__(self, "is_box", len(offs) == (2 * ri + 1) * (2 * rj + 1))


def square(k: int) -> StructuringElement:
    """Full k-by-k box of offsets, odd k >= 1."""
    if k < 1 or k % 2 == 0:
        raise ValueError("square structuring element needs odd k >= 1")
    r = (k - 1) // 2
    return StructuringElement(
        frozenset((i, j) for i in range(-r, r + 1) for j in range(-r, r + 1))
    )


def cross(k: int) -> StructuringElement:
    """Axis-aligned cross of arm length (k-1)/2, odd k >= 1."""
    if k < 1 or k % 2 == 0:
        raise ValueError("cross structuring element needs odd k >= 1")
    r = (k - 1) // 2
    offs = {(i, 0) for i in range(-r, r + 1)} | {(0, j) for j in range(-r, r + 1)}
    return StructuringElement(frozenset(offs))


def _as_mask(mask) -> np.ndarray:
    m = np.asarray(mask, dtype=np.uint8)
    if m.ndim != 2:
        raise ValueError("mask must be 2-D")
    return m


def _pad(m: np.ndarray, ri: int, rj: int, fill: int) -> np.ndarray:
    h, w = m.shape
    p = np.full((h + 2 * ri, w + 2 * rj), fill, dtype=np.uint8)
    p[ri : ri + h, rj : rj + w] = m
    return p


def _axis_reduce(m: np.ndarray, r: int, axis: int, fill: int, op) -> np.ndarray:
    """max/min over a (2r+1)-long window along one axis, padded with fill."""
    h, w = m.shape
    if axis == 1:
        p = np.full((h, w + 2 * r), fill, dtype=np.uint8)
        p[:, r : r + w] = m
        views = [p[:, r + d : r + d + w] for d in range(-r, r + 1)]
    else:
        p = np.full((h + 2 * r, w), fill, dtype=np.uint8)
        p[r : r + h, :] = m
        views = [p[r + d : r + d + h, :] for d in range(-r, r + 1)]
    return op.reduce(views)


def _apply(m: np.ndarray, se: StructuringElement, fill: int, op) -> np.ndarray:
    if se.is_box:
        # Box elements are separable: window max/min along rows then columns.
        out = _axis_reduce(m, se.rj, 1, fill, op)
        return _axis_reduce(out, se.ri, 0, fill, op)
    h, w = m.shape
    p = _pad(m, se.ri, se.rj, fill)
    views = [
        p[se.ri - i : se.ri - i + h, se.rj - j : se.rj - j + w]
        for i, j in sorted(se.offsets)
    ]
    return op.reduce(views)


def dilate(mask, se: StructuringElement) -> np.ndarray:
    """Neighbourhood maximum: out(x, y) = max over (i, j) of in(x-i, y-j).

    Out-of-bounds reads return 0 (background padding).
    """
    out = _apply(_as_mask(mask), se, 0, np.maximum)
    return _frozen(out)


def erode(mask, se: StructuringElement) -> np.ndarray:
    """Neighbourhood minimum: out(x, y) = min over (i, j) of in(x+i, y+j).

    Out-of-bounds reads return 1 (foreground padding), so full-frame
    objects survive erosion.
    """
    out = _apply(_as_mask(mask), se, 1, np.minimum)
    return _frozen(out)


def iterate(op, mask, se: StructuringElement, n: int) -> np.ndarray:
    """n-fold composition of ``op`` (dilate or erode); n = 0 is the identity."""
    if n < 0:
        raise ValueError("iteration count must be >= 0")
    out = _as_mask(mask)
    for _ in range(n):
        out = op(out, se)
    return _frozen(np.array(out, dtype=np.uint8))
