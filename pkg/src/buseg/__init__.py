"""Ground-truth transformations for binary segmentation training.

Provides boundary-band soft labelling, global soft labels and a signed
distance penalty, together with the binary morphology, exact Euclidean
distance transforms, soft Dice loss/metrics, synthetic data and a
desk-scale pixel trainer used to compare them.
"""

from .bench import BenchRecord, bench_csv, run_bench
from .losses import boundary_penalty_loss, soft_dice_grad, soft_dice_loss
from .metrics import (
    ConfusionCounts,
    MetricRecord,
    aggregate,
    confusion_counts,
    evaluate_image,
    metrics_csv,
)
from .morphology import StructuringElement, cross, dilate, erode, iterate, square
from .raster import (
    BadHeader,
    BadMagic,
    FormatError,
    NotBinary,
    OutOfRange,
    binary_mask,
    distance_map,
    format_csv,
    gray_image,
    mask_to_prob,
    prob_map,
    read_mask_pgm,
    read_pfm,
    write_mask_pgm,
    write_pfm,
)
from .rng import SplitMix64, Xoshiro256StarStar
from .synthesis import DatasetItem, SynthConfig, corrupt, draw_mask, generate
from .trainer import (
    BUTransform,
    DPTTransform,
    ExperimentRow,
    PixelModel,
    SLTransform,
    TrainConfig,
    experiment_csv,
    extract_features,
    predict,
    run_experiment,
    train,
    training_loss,
    transform_label,
)
from .transforms import (
    BUParams,
    boundary_uncertainty,
    dpt_transform,
    edt,
    signed_distance_map,
    soft_label,
)

__all__ = [
    "BadHeader",
    "BadMagic",
    "BenchRecord",
    "BUParams",
    "BUTransform",
    "ConfusionCounts",
    "DatasetItem",
    "DPTTransform",
    "ExperimentRow",
    "FormatError",
    "MetricRecord",
    "NotBinary",
    "OutOfRange",
    "PixelModel",
    "SLTransform",
    "SplitMix64",
    "StructuringElement",
    "SynthConfig",
    "TrainConfig",
    "Xoshiro256StarStar",
    "aggregate",
    "bench_csv",
    "binary_mask",
    "boundary_penalty_loss",
    "boundary_uncertainty",
    "confusion_counts",
    "corrupt",
    "cross",
    "dilate",
    "distance_map",
    "dpt_transform",
    "draw_mask",
    "edt",
    "erode",
    "evaluate_image",
    "experiment_csv",
    "extract_features",
    "format_csv",
    "generate",
    "gray_image",
    "iterate",
    "mask_to_prob",
    "metrics_csv",
    "predict",
    "prob_map",
    "read_mask_pgm",
    "read_pfm",
    "run_bench",
    "run_experiment",
    "signed_distance_map",
    "soft_dice_grad",
    "soft_dice_loss",
    "soft_label",
    "square",
    "train",
    "training_loss",
    "transform_label",
    "write_mask_pgm",
    "write_pfm",
]

__version__ = "0.1.0"
