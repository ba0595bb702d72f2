"""End-to-end checks of the duet command-line tool on the bundled fixture."""

import os
import struct
import subprocess
from pathlib import Path

import pytest

DUET = os.environ.get("DUET_BIN", "duet")
FIXTURE = Path(os.environ.get("DUET_FIXTURE", Path(__file__).parents[2] / "data" / "fixture"))
MANIFEST = str(FIXTURE / "manifest.txt")


def run(*args, check_code=0):
    proc = subprocess.run([DUET, *map(str, args)], capture_output=True, text=True)
    if check_code is not None:
        assert proc.returncode == check_code, proc.stderr
    return proc


def read_model(path):
    data = Path(path).read_bytes()
    assert data[:4] == b"DUET"
    (version,) = struct.unpack_from("<I", data, 4)
    (hlen,) = struct.unpack_from("<Q", data, 8)
    header = dict(
        (k.strip(), v.strip())
        for k, v in (line.split("=", 1) for line in data[16 : 16 + hlen].decode().splitlines())
    )
    offset = 16 + hlen
    mats = {}
    for key, n in (("item_weights", int(header["n_items"])), ("user_weights", int(header["n_users"]))):
        if header[key] == "1":
            vals = struct.unpack_from(f"<{n * n}d", data, offset)
            offset += 8 * n * n
            mats[key] = [vals[i * n : (i + 1) * n] for i in range(n)]
    assert offset + 8 == len(data)
    return version, header, mats


def test_fit_writes_model_with_zero_diagonal(tmp_path):
    run("fit", "--manifest", MANIFEST, "--lambda1", 10, "--out", tmp_path)
    version, header, mats = read_model(tmp_path / "model.duet")
    assert version == 1
    assert set(mats) == {"item_weights", "user_weights"}
    for m in mats.values():
        assert max(abs(m[i][i]) for i in range(len(m))) <= 1e-10
    log = (tmp_path / "run.log").read_text()
    for stage in ("load", "gram", "factorize", "assemble"):
        assert f"stage {stage} " in log
    config = (tmp_path / "config.txt").read_text()
    assert "version = " in config and "method = duet" in config


def test_ease_dual_warns_about_sides(tmp_path):
    proc = run("fit", "--manifest", MANIFEST, "--method", "ease_dual", "--out", tmp_path)
    assert "ignores the side matrices" in proc.stderr


def test_missing_manifest_is_usage_error(tmp_path):
    proc = run("fit", "--out", tmp_path, check_code=2)
    assert "manifest" in proc.stderr
    run("fit", "--manifest", tmp_path / "nope.txt", "--out", tmp_path, check_code=2)


def test_unknown_method_and_flag_are_usage_errors(tmp_path):
    run("fit", "--manifest", MANIFEST, "--method", "mf", "--out", tmp_path, check_code=2)
    run("fit", "--manifest", MANIFEST, "--bogus", check_code=2)


def test_cv_is_byte_identical_in_deterministic_mode(tmp_path):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        run("cv", "--manifest", MANIFEST, "--method", "ease_dual", "--method", "duet",
            "--lambda1", 10, "--seed", 7, "--deterministic", "--out", out)
        outs.append(out)
    assert (outs[0] / "cv.csv").read_bytes() == (outs[1] / "cv.csv").read_bytes()
    assert (outs[0] / "summary.txt").read_bytes() == (outs[1] / "summary.txt").read_bytes()
    summary = (outs[0] / "summary.txt").read_text()
    assert "AUPR" in summary and "NDCG100" in summary and "PREC50" in summary
    assert "welch_t_test aupr ease_dual vs duet" in summary
    rows = (outs[0] / "cv.csv").read_text().splitlines()
    assert rows[0] == "method,round,fold,aupr,ndcg100,prec50,prec100"
    assert len(rows) == 1 + 2 * (15 + 2)


def test_cv_threads_do_not_change_results(tmp_path):
    run("cv", "--manifest", MANIFEST, "--lambda1", 10, "--deterministic", "--out", tmp_path / "s")
    run("cv", "--manifest", MANIFEST, "--lambda1", 10, "--threads", 3, "--out", tmp_path / "p")
    assert (tmp_path / "s" / "cv.csv").read_bytes() == (tmp_path / "p" / "cv.csv").read_bytes()


def test_cv_too_many_folds_is_clean_error(tmp_path):
    proc = run("cv", "--manifest", MANIFEST, "--folds", 10000, "--out", tmp_path, check_code=1)
    assert "error:" in proc.stderr


def test_tune_singleton_grid_and_params_roundtrip(tmp_path):
    grid = tmp_path / "grid.txt"
    grid.write_text("lambda = 20\nbeta = 0.5\ngamma = 2\n")
    run("tune", "--manifest", MANIFEST, "--grid-file", grid, "--rounds", 1, "--out", tmp_path / "t")
    best = (tmp_path / "t" / "best_params.txt").read_text()
    assert "lambda1 = 20" in best and "betas = 0.5" in best and "gammas = 2" in best
    run("fit", "--manifest", MANIFEST, "--params", tmp_path / "t" / "best_params.txt",
        "--out", tmp_path / "f")
    assert "lambda1 = 20" in (tmp_path / "f" / "config.txt").read_text()


def test_tune_resume_skips_finished_points(tmp_path):
    grid = tmp_path / "grid.txt"
    grid.write_text("lambda = 1, 10\nbeta = 0, 1\ngamma = 0\n")
    out = tmp_path / "t"
    first = run("tune", "--manifest", MANIFEST, "--grid-file", grid, "--rounds", 1, "--out", out)
    assert "fits executed: 20" in first.stdout
    audit = (out / "audit.csv").read_text().splitlines()
    (out / "audit.csv").write_text("\n".join(audit[:3]) + "\n10,10,")
    second = run("tune", "--manifest", MANIFEST, "--grid-file", grid, "--rounds", 1,
                 "--resume", "--out", out)
    assert "fits executed: 10" in second.stdout
    assert (out / "audit.csv").read_text().splitlines()[1:3] == audit[1:3]
    assert first.stdout.splitlines()[0] == second.stdout.splitlines()[0]


def test_tune_invalid_metric_is_usage_error(tmp_path):
    grid = tmp_path / "grid.txt"
    grid.write_text("objective = auroc\n")
    run("tune", "--manifest", MANIFEST, "--grid-file", grid, "--out", tmp_path, check_code=2)


def test_predict_ranks_unobserved_items(tmp_path):
    run("fit", "--manifest", MANIFEST, "--out", tmp_path / "m")
    run("predict", "--manifest", MANIFEST, "--model", tmp_path / "m" / "model.duet",
        "--top-k", 5, "--out", tmp_path / "p")
    lines = (tmp_path / "p" / "predictions.tsv").read_text().splitlines()
    assert lines[0] == "user\titem\tscore\trank"
    observed = {tuple(l.split("\t")[:2]) for l in (FIXTURE / "interactions.tsv").read_text().splitlines()
                if l and not l.startswith("#")}
    rows = [l.split("\t") for l in lines[1:]]
    assert len(rows) == 40 * 5
    assert not any((r[0], r[1]) in observed for r in rows)
    first = [float(r[2]) for r in rows[:5]]
    assert first == sorted(first, reverse=True)


def test_bench_small_sweep(tmp_path):
    run("bench", "--users", 120, "--items", 100, "--density", 0.05, "--sweep", 50, "--sweep", 100,
        "--out", tmp_path)
    rows = (tmp_path / "bench.csv").read_text().splitlines()
    assert rows[0].startswith("case,n_users,n_items,nnz")
    assert len(rows) == 4
    run("bench", "--users", 0, "--out", tmp_path, check_code=2)


def test_version_flag():
    assert run("--version").stdout.strip()
