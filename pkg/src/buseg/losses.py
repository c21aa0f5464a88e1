"""Soft Dice loss, its analytic gradient, and the distance-penalty loss."""

from __future__ import annotations

import numpy as np

from .raster import _frozen

__all__ = ["soft_dice_loss", "soft_dice_grad", "boundary_penalty_loss"]

DEFAULT_EPS = 1e-6


def _pair(pred, target):
    p = np.asarray(pred, dtype=np.float64)
    g = np.asarray(target, dtype=np.float64)
    if p.shape != g.shape:
        raise ValueError(f"shape mismatch: {p.shape} vs {g.shape}")
    return p, g


def soft_dice_loss(pred, target, eps: float = DEFAULT_EPS) -> float:
    """1 - (2*sum(p*g) + eps) / (sum(p) + sum(g) + eps), sums over all pixels.

    The sum-form denominator keeps the gradient bounded for inputs in
    [0, 1]; ``eps`` smooths and protects against empty targets.
    """
    if eps < 0.0:
        raise ValueError("eps must be >= 0")
    p, g = _pair(pred, target)
    num = 2.0 * float((p * g).sum()) + eps
    den = float(p.sum()) + float(g.sum()) + eps
    return 1.0 - num / den


def soft_dice_grad(pred, target, eps: float = DEFAULT_EPS) -> np.ndarray:
    """Per-pixel derivative of :func:`soft_dice_loss` with respect to pred.

    dL/dp_i = -(2*g_i*(sum(p)+sum(g)+eps) - (2*sum(p*g)+eps)) / (...)^2
    """
    p, g = _pair(pred, target)
    num = 2.0 * float((p * g).sum()) + eps
    den = float(p.sum()) + float(g.sum()) + eps
    grad = -(2.0 * g * den - num) / (den * den)
    return _frozen(grad)


def boundary_penalty_loss(pred, sdm, lam: float, base: float) -> float:
    """base + lam * mean(sdm * pred): penalise mass far outside the target,
    reward mass deep inside it (sdm is negative there)."""
    if lam < 0.0:
        raise ValueError("lambda must be >= 0")
    p, d = _pair(pred, sdm)
    return float(base) + lam * float((d * p).mean())
