import json
import os

import numpy as np
import pytest

from buseg import (
    BUParams,
    boundary_uncertainty,
    mask_to_prob,
    read_mask_pgm,
    read_pfm,
    signed_distance_map,
    write_mask_pgm,
    write_pfm,
)
from buseg.cli import main


@pytest.fixture()
def mask_file(tmp_path):
    m = np.zeros((8, 8), np.uint8)
    m[2:6, 2:6] = 1
    path = tmp_path / "mask.pgm"
    path.write_bytes(write_mask_pgm(m))
    return path, m


def test_transform_sl(tmp_path, mask_file):
    path, m = mask_file
    out = tmp_path / "t.pfm"
    rc = main(["transform", "--method", "sl", "--in", str(path), "--out", str(out),
               "--pfg", "0.9", "--pbg", "0.1"])
    assert rc == 0
    got = read_pfm(out.read_bytes())
    assert set(np.unique(got)) == {np.float32(0.1), np.float32(0.9)}


def test_transform_bu_hard_label_identity(tmp_path, mask_file):
    path, m = mask_file
    out = tmp_path / "t.pfm"
    rc = main(["transform", "--method", "bu", "--in", str(path), "--out", str(out),
               "--alpha", "1", "--beta", "0"])
    assert rc == 0
    assert (read_pfm(out.read_bytes()) == mask_to_prob(m)).all()


def test_transform_bu_matches_library(tmp_path, mask_file):
    path, m = mask_file
    out = tmp_path / "t.pfm"
    rc = main(["transform", "--method", "bu", "--in", str(path), "--out", str(out),
               "--alpha", "0.9", "--beta", "0.1", "--iters", "2", "--se", "cross3"])
    assert rc == 0
    from buseg import cross

    expected = boundary_uncertainty(m, BUParams(0.9, 0.1, 2, se=cross(3)))
    assert np.allclose(read_pfm(out.read_bytes()), expected, atol=1e-7)


def test_transform_bu_balanced_violation_exits_2(tmp_path, mask_file, capsys):
    path, _ = mask_file
    rc = main(["transform", "--method", "bu", "--in", str(path),
               "--out", str(tmp_path / "t.pfm"), "--alpha", "0.8", "--beta", "0.3"])
    assert rc == 2
    assert "alpha+beta=1" in capsys.readouterr().err


def test_transform_dpt_writes_sidecars(tmp_path, mask_file):
    path, m = mask_file
    out = tmp_path / "t.pfm"
    rc = main(["transform", "--method", "dpt", "--in", str(path), "--out", str(out)])
    assert rc == 0
    assert (read_pfm(out.read_bytes()) == mask_to_prob(m)).all()
    scaled = read_pfm((tmp_path / "t.pfm.sdm.pfm").read_bytes())
    side = json.loads((tmp_path / "t.pfm.sdm.json").read_text())
    reconstructed = side["min"] + scaled * (side["max"] - side["min"])
    expected = np.asarray(signed_distance_map(m))
    assert np.abs(reconstructed - expected).max() < 1e-5
    assert side["min"] == expected.min() and side["max"] == expected.max()


def test_transform_missing_input_exits_3(tmp_path):
    rc = main(["transform", "--method", "sl", "--in", str(tmp_path / "nope.pgm"),
               "--out", str(tmp_path / "t.pfm"), "--pfg", "0.9", "--pbg", "0.1"])
    assert rc == 3


def test_transform_garbage_input_exits_3(tmp_path):
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"JUNK")
    rc = main(["transform", "--method", "sl", "--in", str(bad),
               "--out", str(tmp_path / "t.pfm"), "--pfg", "0.9", "--pbg", "0.1"])
    assert rc == 3


def test_transform_sl_missing_probs_exits_2(tmp_path, mask_file):
    path, _ = mask_file
    rc = main(["transform", "--method", "sl", "--in", str(path),
               "--out", str(tmp_path / "t.pfm")])
    assert rc == 2


def test_bad_flags_exit_2(tmp_path):
    rc = main(["transform", "--method", "nope", "--in", "x", "--out", "y"])
    assert rc == 2


def test_synth_idempotent(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        assert main(["synth", "--seed", "9", "--count", "2", "--size", "16",
                     "--out", str(out)]) == 0
    names = sorted(os.listdir(out1))
    assert names == ["gt_000.pgm", "gt_001.pgm", "img_000.pfm", "img_001.pfm",
                     "manifest.csv"]
    for name in names:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_synth_manifest_contents(tmp_path):
    out = tmp_path / "d"
    main(["synth", "--seed", "1", "--count", "1", "--size", "16", "--out", str(out)])
    text = (out / "manifest.csv").read_text()
    assert text == "image_id,image_path,mask_path\n000,img_000.pfm,gt_000.pgm\n"
    read_mask_pgm((out / "gt_000.pgm").read_bytes())
    read_pfm((out / "img_000.pfm").read_bytes())


def test_train_zero_epochs_writes_zero_weights(tmp_path):
    out = tmp_path / "d"
    main(["synth", "--seed", "2", "--count", "2", "--size", "16", "--out", str(out)])
    model_path = tmp_path / "model.json"
    rc = main(["train", "--manifest", str(out / "manifest.csv"), "--epochs", "0",
               "--lr", "1.0", "--out", str(model_path)])
    assert rc == 0
    payload = json.loads(model_path.read_text())
    assert payload["weights"] == [0.0, 0.0, 0.0, 0.0]
    assert payload["loss_history"] == []


def test_train_deterministic_bytes(tmp_path):
    out = tmp_path / "d"
    main(["synth", "--seed", "3", "--count", "3", "--size", "16", "--out", str(out)])
    blobs = []
    for name in ("m1.json", "m2.json"):
        path = tmp_path / name
        rc = main(["train", "--manifest", str(out / "manifest.csv"),
                   "--transform", "bu", "--alpha", "0.9", "--beta", "0.1",
                   "--epochs", "10", "--lr", "5.0", "--scenario", "under",
                   "--corrupt-k", "1", "--out", str(path)])
        assert rc == 0
        blobs.append(path.read_bytes())
    assert blobs[0] == blobs[1]


def test_eval_perfect_predictions(tmp_path):
    gt_dir = tmp_path / "gt"
    pred_dir = tmp_path / "pred"
    gt_dir.mkdir()
    pred_dir.mkdir()
    rng = np.random.default_rng(81)
    for i in range(3):
        m = (rng.random((8, 8)) < 0.5).astype(np.uint8)
        m[0, 0] = 1
        (gt_dir / f"gt_{i:03d}.pgm").write_bytes(write_mask_pgm(m))
        (pred_dir / f"pred_{i:03d}.pfm").write_bytes(write_pfm(mask_to_prob(m)))
    out = tmp_path / "metrics.csv"
    rc = main(["eval", "--pred-dir", str(pred_dir), "--gt-dir", str(gt_dir),
               "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "image_id,dsc,precision,recall,degenerate_flag"
    assert len(lines) == 5  # 3 images + mean
    for line in lines[1:]:
        _, dsc, prec, rec, flag = line.split(",")
        assert (dsc, prec, rec, flag) == ("1.0", "1.0", "1.0", "0")
    assert lines[-1].startswith("mean,")


def test_eval_missing_prediction_exits_3(tmp_path):
    gt_dir = tmp_path / "gt"
    pred_dir = tmp_path / "pred"
    gt_dir.mkdir()
    pred_dir.mkdir()
    (gt_dir / "gt_000.pgm").write_bytes(write_mask_pgm(np.ones((2, 2), np.uint8)))
    rc = main(["eval", "--pred-dir", str(pred_dir), "--gt-dir", str(gt_dir),
               "--out", str(tmp_path / "m.csv")])
    assert rc == 3


def test_bench_low_reps_exits_2(tmp_path):
    rc = main(["bench", "--sizes", "32", "--reps", "5",
               "--out", str(tmp_path / "b.csv")])
    assert rc == 2


def test_bench_writes_csv(tmp_path):
    out = tmp_path / "b.csv"
    rc = main(["bench", "--sizes", "32", "--reps", "10", "--seed", "4",
               "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "method,size,reps,median_ns"
    assert len(lines) == 4


def test_transform_idempotent_bytes(tmp_path, mask_file):
    path, _ = mask_file
    outs = []
    for name in ("x.pfm", "y.pfm"):
        out = tmp_path / name
        main(["transform", "--method", "bu", "--in", str(path), "--out", str(out),
              "--alpha", "0.7", "--beta", "0.3"])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
