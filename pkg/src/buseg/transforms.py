"""Ground-truth transformations for binary segmentation targets.

Three transforms are provided:

* ``soft_label`` replaces the hard {0, 1} targets globally with a
  foreground and a background probability.
* ``boundary_uncertainty`` softens only thin bands around object
  boundaries, obtained by iterated dilation and erosion of the mask:
  the interior band (mask minus its erosion) is set to ``alpha``, the
  exterior band (dilation minus mask) to ``beta``, the deep interior
  stays 1 and everything else stays 0. ``alpha=1, beta=0`` therefore
  reproduces the hard labels exactly; ``alpha=beta=1`` is a pure
  dilation of the target and ``alpha=beta=0`` a pure erosion.
* ``dpt_transform`` keeps the hard labels but pairs them with a signed
  Euclidean distance map to the class boundary, for use as a loss
  penalty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .morphology import StructuringElement, dilate, erode, iterate, square
from .raster import _frozen, binary_mask, mask_to_prob

__all__ = [
    "BUParams",
    "soft_label",
    "boundary_uncertainty",
    "edt",
    "signed_distance_map",
    "dpt_transform",
]

_SQUARE3 = square(3)
_BALANCED_TOL = 1e-12


@dataclass(frozen=True)
class BUParams:
    """Parameters of the boundary-uncertainty transform.

    ``alpha`` is the value assigned to the interior band and ``beta``
    the value assigned to the exterior band; ``n_iter`` controls the
    band width (iterations of the morphological operation with ``se``).
    Balanced mode requires alpha + beta = 1 and alpha >= beta (random
    boundary error); unbalanced mode only requires 0 <= alpha + beta <= 2
    (systematic under- or over-segmentation bias).
    """

    alpha: float
    beta: float
    n_iter: int = 1
    se: StructuringElement = field(default=_SQUARE3)
    mode: str = "balanced"

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
            raise ValueError("alpha and beta must lie in [0, 1]")
        if int(self.n_iter) < 1:
            raise ValueError("n_iter must be a positive integer")
        if self.mode == "balanced":
            if abs(a + b - 1.0) > _BALANCED_TOL:
                raise ValueError(f"balanced requires alpha+beta=1 (got {a + b!r})")
            if a < b:
                raise ValueError("balanced requires alpha >= beta")
        elif self.mode == "unbalanced":
            if not (0.0 <= a + b <= 2.0):
                raise ValueError("unbalanced requires 0 <= alpha+beta <= 2")
        else:
            raise ValueError(f"unknown mode {self.mode!r}")


def soft_label(mask, p_fg: float, p_bg: float) -> np.ndarray:
    """Set every foreground pixel to ``p_fg`` and every background pixel
    to ``p_bg``, with 0 <= p_bg <= p_fg <= 1."""
    if not (0.0 <= p_bg <= p_fg <= 1.0):
        raise ValueError("soft labels require 0 <= p_bg <= p_fg <= 1")
    m = binary_mask(mask)
    lut = np.array([p_bg, p_fg], dtype=np.float64)
    return _frozen(lut[m])


def boundary_uncertainty(mask, params: BUParams) -> np.ndarray:
    """Assign soft values to the bands around object boundaries.

    With D the ``n_iter``-fold dilation and E the ``n_iter``-fold
    erosion of the mask: pixels in E map to 1, pixels in mask \\ E to
    ``alpha``, pixels in D \\ mask to ``beta`` and pixels outside D to
    0. Pixels outside the two bands keep their hard-label value exactly.
    """
    m = binary_mask(mask)
    d = iterate(dilate, m, params.se, params.n_iter)
    e = iterate(erode, m, params.se, params.n_iter)
    # D >= mask >= E pointwise, so d+m+e encodes the band index 0..3.
    code = d + m + e
    lut = np.array([0.0, params.beta, params.alpha, 1.0], dtype=np.float64)
    return _frozen(lut[code])


def _edt_1d(f: list) -> list:
    """Exact 1-D squared distance transform of sampled function ``f``
    by the lower envelope of parabolas."""
    n = len(f)
    d = [0.0] * n
    v = [0] * n
    z = [0.0] * (n + 1)
    inf = math.inf
    k = 0
    z[0] = -inf
    z[1] = inf
    for q in range(1, n):
        fq = f[q] + q * q
        s = (fq - (f[v[k]] + v[k] * v[k])) / (2 * q - 2 * v[k])
        while s <= z[k]:
            k -= 1
            s = (fq - (f[v[k]] + v[k] * v[k])) / (2 * q - 2 * v[k])
        k += 1
        v[k] = q
        z[k] = s
        z[k + 1] = inf
    k = 0
    for q in range(n):
        while z[k + 1] < q:
            k += 1
        d[q] = (q - v[k]) ** 2 + f[v[k]]
    return d


def edt(mask) -> np.ndarray:
    """Exact Euclidean distance from each pixel centre to the nearest
    foreground pixel centre (0 on foreground pixels).

    Computed as the two-pass per-dimension squared-distance transform
    (lower envelope of parabolas along columns, then along rows) and
    square-rooted at the end.
    """
    m = binary_mask(mask)
    if not m.any():
        raise ValueError("mask has no foreground pixel; distance undefined")
    h, w = m.shape
    # Finite sentinel, exact in float64 and larger than any true squared
    # distance, so mixed-sentinel arithmetic never produces inf - inf.
    big = float(2 * (h * h + w * w) + 1)
    f = np.where(m == 1, 0.0, big)
    cols = np.array([_edt_1d(c) for c in f.T.tolist()]).T
    rows = np.array([_edt_1d(r) for r in cols.tolist()])
    return _frozen(np.sqrt(rows))


def _boundary_set(m: np.ndarray) -> np.ndarray:
    """Pixels with at least one 4-neighbour of the opposite class."""
    b = np.zeros(m.shape, dtype=bool)
    dv = m[1:, :] != m[:-1, :]
    b[1:, :] |= dv
    b[:-1, :] |= dv
    dh = m[:, 1:] != m[:, :-1]
    b[:, 1:] |= dh
    b[:, :-1] |= dh
    return b


def signed_distance_map(mask) -> np.ndarray:
    """Signed exact Euclidean distance to the class boundary.

    The boundary set B holds the pixels on both sides of every class
    transition (4-connectivity). Distances are positive outside the
    target, negative inside, and exactly 0 on B.
    """
    m = binary_mask(mask)
    if not m.any() or m.all():
        raise ValueError("mask is all one class; boundary undefined")
    b = _boundary_set(m)
    dist = np.asarray(edt(b.astype(np.uint8)))
    out = np.where(m == 1, -dist, dist)
    out[b] = 0.0
    return _frozen(out)


def dpt_transform(mask):
    """Hard-label probability map paired with the signed distance map."""
    return mask_to_prob(binary_mask(mask)), signed_distance_map(mask)
