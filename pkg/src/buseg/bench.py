"""Per-image timing of the ground-truth transforms.

Medians over repeated runs after warmup resist scheduler noise;
absolute times are never asserted downstream, only orderings and
scaling bands.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

from .raster import format_csv
from .rng import Xoshiro256StarStar
from .synthesis import SynthConfig, draw_mask
from .transforms import BUParams, boundary_uncertainty, dpt_transform, soft_label

__all__ = ["BenchRecord", "run_bench", "bench_csv", "METHODS"]

METHODS = ("sl", "bu", "dpt")
MIN_REPS = 10


@dataclass(frozen=True)
class BenchRecord:
    method: str
    size: int
    reps: int
    median_ns: int


def _transform_fns():
    bu_params = BUParams(alpha=0.9, beta=0.1, n_iter=1)
    return {
        "sl": lambda m: soft_label(m, 0.9, 0.1),
        "bu": lambda m: boundary_uncertainty(m, bu_params),
        "dpt": lambda m: dpt_transform(m),
    }


def run_bench(sizes, reps: int = 30, seed: int = 0, warmup: int = 3) -> list:
    """Time each transform on one random square mask per size.

    Masks come from one synthesis stream seeded with ``seed``, drawn in
    the order the sizes are listed. Requires reps >= 10; each timing is
    preceded by ``warmup`` untimed runs. Returns one BenchRecord per
    (method, size) with the median wall time in nanoseconds.
    """
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise ValueError("need at least one size")
    if reps < MIN_REPS:
        raise ValueError(f"reps must be >= {MIN_REPS}")
    fns = _transform_fns()
    rng = Xoshiro256StarStar(seed)
    records = []
    for size in sizes:
        config = SynthConfig(seed=seed, count=1, width=size, height=size)
        mask = draw_mask(rng, config)
        for method in METHODS:
            fn = fns[method]
            for _ in range(warmup):
                fn(mask)
            times = []
            for _ in range(reps):
                t0 = time.perf_counter_ns()
                fn(mask)
                times.append(time.perf_counter_ns() - t0)
            records.append(BenchRecord(method, size, reps, int(statistics.median(times))))
    return records


def bench_csv(records) -> str:
    """CSV with schema ``method,size,reps,median_ns``."""
    return format_csv(
        ("method", "size", "reps", "median_ns"),
        [(r.method, r.size, r.reps, r.median_ns) for r in records],
    )
