"""Per-image segmentation metrics (DSC, precision, recall) and averaging.

Predictions are binarized at a threshold (ties go to foreground). When a
metric's denominator is zero it is defined as 1.0 and the record is
flagged degenerate, so per-image averages are always totally defined.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .raster import format_csv

__all__ = [
    "ConfusionCounts",
    "MetricRecord",
    "confusion_counts",
    "evaluate_image",
    "aggregate",
    "metrics_csv",
]


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class MetricRecord:
    image_id: str
    dsc: float
    precision: float
    recall: float
    degenerate: bool = False


def confusion_counts(pred, gt, threshold: float = 0.5) -> ConfusionCounts:
    """Binarize ``pred`` at ``threshold`` (>= goes to foreground) and
    count agreement with the ground-truth mask."""
    p = np.asarray(pred, dtype=np.float64)
    g = np.asarray(gt)
    if p.shape != g.shape:
        raise ValueError(f"shape mismatch: {p.shape} vs {g.shape}")
    pb = p >= threshold
    gb = g == 1
    tp = int(np.count_nonzero(pb & gb))
    fp = int(np.count_nonzero(pb & ~gb))
    fn = int(np.count_nonzero(~pb & gb))
    tn = int(np.count_nonzero(~pb & ~gb))
    return ConfusionCounts(tp, fp, fn, tn)


def _ratio(num: int, den: int):
    """(value, was_degenerate); a zero denominator defines the ratio as 1."""
    if den == 0:
        return 1.0, True
    return num / den, False


def evaluate_image(pred, gt, threshold: float = 0.5, image_id: str = "") -> MetricRecord:
    """DSC = 2tp/(2tp+fp+fn), precision = tp/(tp+fp), recall = tp/(tp+fn)."""
    c = confusion_counts(pred, gt, threshold)
    dsc, d1 = _ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn)
    precision, d2 = _ratio(c.tp, c.tp + c.fp)
    recall, d3 = _ratio(c.tp, c.tp + c.fn)
    return MetricRecord(image_id, dsc, precision, recall, d1 or d2 or d3)


def aggregate(records) -> MetricRecord:
    """Unweighted arithmetic mean of each metric, in list order."""
    records = list(records)
    if not records:
        raise ValueError("cannot aggregate an empty record list")
    n = len(records)
    return MetricRecord(
        image_id="mean",
        dsc=sum(r.dsc for r in records) / n,
        precision=sum(r.precision for r in records) / n,
        recall=sum(r.recall for r in records) / n,
        degenerate=any(r.degenerate for r in records),
    )


def metrics_csv(records) -> str:
    """CSV with schema ``image_id,dsc,precision,recall,degenerate_flag``."""
    rows = [
        (r.image_id, r.dsc, r.precision, r.recall, int(r.degenerate))
        for r in records
    ]
    return format_csv(("image_id", "dsc", "precision", "recall", "degenerate_flag"), rows)
