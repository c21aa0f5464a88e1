"""Command-line surface: transform, synth, train, eval and bench.

Exit codes: 0 on success, 2 for bad flags or violated parameter
constraints, 3 for I/O or file-format errors. All file writes are
atomic (temp file + rename), so interrupted runs never leave
half-written outputs.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import tempfile

from .bench import bench_csv, run_bench
from .metrics import aggregate, evaluate_image, metrics_csv
from .morphology import cross, square
from .raster import (
    FormatError,
    format_csv,
    read_mask_pgm,
    read_pfm,
    write_mask_pgm,
    write_pfm,
)
from .synthesis import DatasetItem, SynthConfig, corrupt, generate
from .trainer import BUTransform, DPTTransform, SLTransform, TrainConfig, train
from .transforms import BUParams, boundary_uncertainty, dpt_transform, soft_label

_SE_CHOICES = {"square3": lambda: square(3), "cross3": lambda: cross(3), "square5": lambda: square(5)}

_BU_HELP = (
    "alpha labels the band just inside the boundary (mask minus its "
    "erosion), beta the band just outside (dilation minus mask); "
    "alpha=1 beta=0 reproduces the hard labels exactly"
)


def _write_atomic(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_bytes(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="buseg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("transform", help="apply a ground-truth transform to a mask")
    t.add_argument("--method", choices=["sl", "bu", "dpt"], required=True)
    t.add_argument("--in", dest="input", required=True, metavar="MASK.pgm")
    t.add_argument("--out", required=True, metavar="TARGET.pfm")
    t.add_argument("--pfg", type=float, help="sl: foreground probability")
    t.add_argument("--pbg", type=float, help="sl: background probability")
    t.add_argument("--alpha", type=float, help="bu: interior-band value; " + _BU_HELP)
    t.add_argument("--beta", type=float, help="bu: exterior-band value")
    t.add_argument("--iters", type=int, default=1, help="bu: morphology iterations")
    t.add_argument("--se", choices=sorted(_SE_CHOICES), default="square3")
    t.add_argument("--mode", choices=["balanced", "unbalanced"], default="balanced")

    s = sub.add_parser("synth", help="generate a synthetic dataset")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--count", type=int, required=True)
    s.add_argument("--size", type=int, required=True)
    s.add_argument("--out", required=True, metavar="DIR")

    tr = sub.add_parser("train", help="train the pixel classifier on a manifest")
    tr.add_argument("--manifest", required=True, metavar="manifest.csv")
    tr.add_argument("--transform", choices=["none", "sl", "bu", "dpt"], default="none")
    tr.add_argument("--pfg", type=float, default=0.9)
    tr.add_argument("--pbg", type=float, default=0.1)
    tr.add_argument("--alpha", type=float)
    tr.add_argument("--beta", type=float)
    tr.add_argument("--iters", type=int, default=1)
    tr.add_argument("--se", choices=sorted(_SE_CHOICES), default="square3")
    tr.add_argument("--mode", choices=["balanced", "unbalanced"], default="balanced")
    tr.add_argument("--lambda", dest="lam", type=float, default=0.01)
    tr.add_argument("--epochs", type=int, required=True)
    tr.add_argument("--lr", type=float, required=True)
    tr.add_argument("--seed", type=int, default=0)
    tr.add_argument("--scenario", choices=["clean", "under", "over"], default="clean")
    tr.add_argument("--corrupt-k", type=int, default=2)
    tr.add_argument("--out", required=True, metavar="model.json")

    e = sub.add_parser("eval", help="score predictions against ground-truth masks")
    e.add_argument("--pred-dir", required=True)
    e.add_argument("--gt-dir", required=True)
    e.add_argument("--out", required=True, metavar="metrics.csv")

    b = sub.add_parser("bench", help="time the transforms per image size")
    b.add_argument("--sizes", default="128,256,512", help="comma-separated side lengths")
    b.add_argument("--reps", type=int, default=30)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", help="CSV path (default: stdout)")
    return parser


def _build_bu_params(args) -> BUParams:
    if args.alpha is None or args.beta is None:
        raise ValueError("bu requires --alpha and --beta")
    return BUParams(
        alpha=args.alpha,
        beta=args.beta,
        n_iter=args.iters,
        se=_SE_CHOICES[args.se](),
        mode=args.mode,
    )


def _cmd_transform(args) -> int:
    mask = read_mask_pgm(_read_bytes(args.input))
    if args.method == "sl":
        if args.pfg is None or args.pbg is None:
            raise ValueError("sl requires --pfg and --pbg")
        _write_atomic(args.out, write_pfm(soft_label(mask, args.pfg, args.pbg)))
    elif args.method == "bu":
        _write_atomic(args.out, write_pfm(boundary_uncertainty(mask, _build_bu_params(args))))
    else:
        probs, sdm = dpt_transform(mask)
        lo, hi = float(sdm.min()), float(sdm.max())
        scaled = (sdm - lo) / (hi - lo) if hi > lo else sdm - lo
        sidecar = {"formula": "sdm = min + value * (max - min)", "max": hi, "min": lo}
        _write_atomic(args.out, write_pfm(probs))
        _write_atomic(args.out + ".sdm.pfm", write_pfm(scaled))
        _write_atomic(
            args.out + ".sdm.json",
            (json.dumps(sidecar, sort_keys=True) + "\n").encode("ascii"),
        )
    return 0


def _cmd_synth(args) -> int:
    config = SynthConfig(seed=args.seed, count=args.count, width=args.size, height=args.size)
    items = generate(config)
    os.makedirs(args.out, exist_ok=True)
    rows = []
    for item in items:
        img_name = f"img_{item.image_id}.pfm"
        gt_name = f"gt_{item.image_id}.pgm"
        _write_atomic(os.path.join(args.out, img_name), write_pfm(item.image))
        _write_atomic(os.path.join(args.out, gt_name), write_mask_pgm(item.mask))
        rows.append((item.image_id, img_name, gt_name))
    manifest = format_csv(("image_id", "image_path", "mask_path"), rows)
    _write_atomic(os.path.join(args.out, "manifest.csv"), manifest.encode("ascii"))
    return 0


def _load_manifest(path: str) -> list:
    base = os.path.dirname(os.path.abspath(path))
    with open(path, "r", newline="") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
    items = []
    for row in rows:
        image = read_pfm(_read_bytes(os.path.join(base, row["image_path"])))
        mask = read_mask_pgm(_read_bytes(os.path.join(base, row["mask_path"])))
        items.append(DatasetItem(image, mask, row["image_id"]))
    return items


def _cmd_train(args) -> int:
    items = _load_manifest(args.manifest)
    if args.scenario != "clean":
        se = _SE_CHOICES[args.se]()
        items = [
            DatasetItem(it.image, corrupt(it.mask, args.scenario, args.corrupt_k, se), it.image_id)
            for it in items
        ]
    transform = None
    if args.transform == "sl":
        transform = SLTransform(args.pfg, args.pbg)
    elif args.transform == "bu":
        transform = BUTransform(_build_bu_params(args))
    elif args.transform == "dpt":
        transform = DPTTransform(args.lam)
    config = TrainConfig(
        epochs=args.epochs, learning_rate=args.lr, transform=transform, seed=args.seed
    )
    model, history = train(items, config)
    payload = {"loss_history": history, "weights": [float(w) for w in model.weights]}
    _write_atomic(args.out, (json.dumps(payload, sort_keys=True) + "\n").encode("ascii"))
    return 0


def _cmd_eval(args) -> int:
    gt_files = sorted(f for f in os.listdir(args.gt_dir) if f.endswith(".pgm"))
    if not gt_files:
        raise FileNotFoundError(f"no .pgm masks in {args.gt_dir}")
    records = []
    for name in gt_files:
        stem = name[:-4]
        image_id = stem[3:] if stem.startswith("gt_") else stem
        pred_path = None
        for candidate in (f"pred_{image_id}.pfm", f"{image_id}.pfm"):
            p = os.path.join(args.pred_dir, candidate)
            if os.path.exists(p):
                pred_path = p
                break
        if pred_path is None:
            raise FileNotFoundError(f"no prediction for image {image_id!r}")
        gt = read_mask_pgm(_read_bytes(os.path.join(args.gt_dir, name)))
        pred = read_pfm(_read_bytes(pred_path))
        records.append(evaluate_image(pred, gt, image_id=image_id))
    records.append(aggregate(records))
    _write_atomic(args.out, metrics_csv(records).encode("ascii"))
    return 0


def _cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    records = run_bench(sizes, reps=args.reps, seed=args.seed)
    text = bench_csv(records)
    if args.out:
        _write_atomic(args.out, text.encode("ascii"))
    else:
        sys.stdout.write(text)
    return 0


_COMMANDS = {
    "transform": _cmd_transform,
    "synth": _cmd_synth,
    "train": _cmd_train,
    "eval": _cmd_eval,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
