"""Desk-scale pixel classifier for comparing ground-truth transforms.

The model is a linear-logistic classifier over four per-pixel features
(bias, intensity, 3x3 box-mean intensity, gradient magnitude), trained
with full-batch gradient descent on the mean soft Dice loss across
images. It is deliberately tiny: with zero init, a fixed learning rate
and no stochasticity, two runs that differ only in the target transform
isolate the transform's effect exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .losses import DEFAULT_EPS, boundary_penalty_loss, soft_dice_grad, soft_dice_loss
from .metrics import aggregate, evaluate_image
from .morphology import square
from .raster import _frozen, format_csv, mask_to_prob
from .synthesis import DatasetItem, SynthConfig, corrupt, generate
from .transforms import BUParams, boundary_uncertainty, signed_distance_map, soft_label

__all__ = [
    "SLTransform",
    "BUTransform",
    "DPTTransform",
    "TrainConfig",
    "PixelModel",
    "extract_features",
    "predict",
    "training_loss",
    "train",
    "transform_label",
    "ExperimentRow",
    "run_experiment",
    "experiment_csv",
]

DEFAULT_EPOCHS = 300
DEFAULT_LEARNING_RATE = 20.0


@dataclass(frozen=True)
class SLTransform:
    """Train against globally softened labels."""

    p_fg: float = 0.9
    p_bg: float = 0.1


@dataclass(frozen=True)
class BUTransform:
    """Train against boundary-band softened labels."""

    params: BUParams


@dataclass(frozen=True)
class DPTTransform:
    """Train against hard labels plus a signed-distance penalty term."""

    lam: float = 0.01


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = DEFAULT_EPOCHS
    learning_rate: float = DEFAULT_LEARNING_RATE
    eps: float = DEFAULT_EPS
    transform: object = None  # None | SLTransform | BUTransform | DPTTransform
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.learning_rate <= 0.0:
            raise ValueError("learning rate must be > 0")


@dataclass(frozen=True)
class PixelModel:
    """Linear-logistic weights over [bias, intensity, box-mean, gradient]."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.shape != (4,) or not np.isfinite(w).all():
            raise ValueError("weights must be a finite 4-vector")
        object.__setattr__(self, "weights", _frozen(w.copy()))

    @staticmethod
    def zeros() -> "PixelModel":
        return PixelModel(np.zeros(4))


def extract_features(image) -> np.ndarray:
    """Per-pixel feature field of shape (h, w, 4).

    Feature 0 is the constant 1, feature 1 the raw intensity, feature 2
    the 3x3 box mean and feature 3 the central-difference gradient
    magnitude, both with edge-replicate padding.
    """
    img = np.asarray(image, dtype=np.float64)
    h, w = img.shape
    p = np.pad(img, 1, mode="edge")
    box = np.zeros((h, w))
    for di in range(3):
        for dj in range(3):
            box += p[di : di + h, dj : dj + w]
    box /= 9.0
    dx = (p[1:-1, 2:] - p[1:-1, :-2]) / 2.0
    dy = (p[2:, 1:-1] - p[:-2, 1:-1]) / 2.0
    feats = np.empty((h, w, 4))
    feats[:, :, 0] = 1.0
    feats[:, :, 1] = img
    feats[:, :, 2] = box
    feats[:, :, 3] = np.hypot(dx, dy)
    return _frozen(feats)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    t = np.exp(-np.abs(z))
    return np.where(z >= 0.0, 1.0 / (1.0 + t), t / (1.0 + t))


def predict(model: PixelModel, image) -> np.ndarray:
    """Per-pixel foreground probability logistic(w . f)."""
    img = np.asarray(image, dtype=np.float64)
    feats = extract_features(img).reshape(-1, 4)
    p = _sigmoid(feats @ np.asarray(model.weights, dtype=np.float64))
    return _frozen(p.reshape(img.shape))


def _target_for(mask, transform):
    if transform is None or isinstance(transform, DPTTransform):
        return mask_to_prob(mask)
    if isinstance(transform, SLTransform):
        return soft_label(mask, transform.p_fg, transform.p_bg)
    if isinstance(transform, BUTransform):
        return boundary_uncertainty(mask, transform.params)
    raise ValueError(f"unknown transform {transform!r}")


def _prepare(dataset, config: TrainConfig):
    """Per image: (flat features, flat target, flat sdm or None)."""
    if not dataset:
        raise ValueError("dataset must not be empty")
    prepared = []
    for item in dataset:
        feats = extract_features(item.image).reshape(-1, 4)
        target = np.asarray(_target_for(item.mask, config.transform)).ravel()
        sdm = None
        if isinstance(config.transform, DPTTransform):
            sdm = np.asarray(signed_distance_map(item.mask)).ravel()
        prepared.append((feats, target, sdm))
    return prepared


def _image_loss_grad(weights, feats, target, sdm, config):
    z = feats @ weights
    p = _sigmoid(z)
    loss = soft_dice_loss(p, target, config.eps)
    dldp = np.array(soft_dice_grad(p, target, config.eps))
    if sdm is not None:
        loss = boundary_penalty_loss(p, sdm, config.transform.lam, loss)
        dldp += config.transform.lam * sdm / sdm.size
    grad = feats.T @ (dldp * p * (1.0 - p))
    return loss, grad


def training_loss(dataset, weights, config: TrainConfig) -> float:
    """Mean per-image objective that :func:`train` descends on."""
    w = np.asarray(weights, dtype=np.float64)
    prepared = _prepare(dataset, config)
    total = 0.0
    for feats, target, sdm in prepared:
        loss, _ = _image_loss_grad(w, feats, target, sdm, config)
        total += loss
    return total / len(prepared)


def train(dataset, config: TrainConfig):
    """Full-batch gradient descent from zero weights.

    Returns (model, history) where history[e] is the mean loss with the
    weights at the start of epoch e. Deterministic for a fixed dataset
    and config; gradients accumulate in image-index order.
    """
    prepared = _prepare(dataset, config)
    w = np.zeros(4)
    history = []
    for _ in range(config.epochs):
        total = 0.0
        grad = np.zeros(4)
        for feats, target, sdm in prepared:
            loss, g = _image_loss_grad(w, feats, target, sdm, config)
            total += loss
            grad += g
        history.append(total / len(prepared))
        w -= config.learning_rate * grad / len(prepared)
    return PixelModel(_frozen(w)), history


def transform_label(transform) -> str:
    """Stable CSV-safe name of a target transform."""
    if transform is None:
        return "none"
    if isinstance(transform, SLTransform):
        return f"sl({transform.p_fg:g}/{transform.p_bg:g})"
    if isinstance(transform, BUTransform):
        p = transform.params
        return f"bu({p.alpha:g}/{p.beta:g}/n{p.n_iter})"
    if isinstance(transform, DPTTransform):
        return f"dpt({transform.lam:g})"
    raise ValueError(f"unknown transform {transform!r}")


@dataclass(frozen=True)
class ExperimentRow:
    scenario: str
    transform: str
    seed: str
    dsc: float
    precision: float
    recall: float


@lru_cache(maxsize=32)
def _suite_dataset(seed: int, count: int, size: int):
    return tuple(generate(SynthConfig(seed=seed, count=count, width=size, height=size)))


def run_experiment(
    scenario: str,
    transform,
    seeds,
    corrupt_k: int = 2,
    epochs: int = DEFAULT_EPOCHS,
    learning_rate: float = DEFAULT_LEARNING_RATE,
    dataset_count: int = 50,
    image_size: int = 64,
) -> list:
    """Train/evaluate one transform under one corruption scenario.

    Per seed: generate a dataset, split 80/20 by index order, corrupt
    the *training* labels per scenario (clean: none; under: erode k
    times; over: dilate k times), train, then evaluate on the held-out
    images against their uncorrupted masks. Returns one row per seed
    plus a final row with seed="mean".
    """
    if scenario not in ("clean", "under", "over"):
        raise ValueError(f"unknown scenario {scenario!r}")
    seeds = list(seeds)
    if not seeds:
        raise ValueError("need at least one seed")
    label = transform_label(transform)
    se = square(3)
    rows = []
    for seed in seeds:
        items = _suite_dataset(seed, dataset_count, image_size)
        split = (len(items) * 4) // 5
        train_items, test_items = items[:split], items[split:]
        if scenario != "clean":
            train_items = [
                DatasetItem(it.image, corrupt(it.mask, scenario, corrupt_k, se), it.image_id)
                for it in train_items
            ]
        config = TrainConfig(
            epochs=epochs, learning_rate=learning_rate, transform=transform, seed=seed
        )
        model, _ = train(train_items, config)
        records = [
            evaluate_image(predict(model, it.image), it.mask, image_id=it.image_id)
            for it in test_items
        ]
        agg = aggregate(records)
        rows.append(ExperimentRow(scenario, label, str(seed), agg.dsc, agg.precision, agg.recall))
    n = len(rows)
    rows.append(
        ExperimentRow(
            scenario,
            label,
            "mean",
            sum(r.dsc for r in rows) / n,
            sum(r.precision for r in rows) / n,
            sum(r.recall for r in rows) / n,
        )
    )
    return rows


def experiment_csv(rows) -> str:
    """CSV with schema ``scenario,transform,seed,dsc,precision,recall``."""
    return format_csv(
        ("scenario", "transform", "seed", "dsc", "precision", "recall"),
        [(r.scenario, r.transform, r.seed, r.dsc, r.precision, r.recall) for r in rows],
    )
