import json

import numpy as np
import pytest
from click.testing import CliRunner

from sparsefactor.attention import PsfAttnModel, save_model
from sparsefactor.cli import register_commands
from sparsefactor.config import ModelConfig
from sparsefactor.data import gen_temporal_order, write_dataset
from sparsefactor.factorization import load_chain


@pytest.fixture
def app():
    return register_commands()


@pytest.fixture
def runner():
    return CliRunner()


def run(runner, app, *args, code=0):
    result = runner.invoke(app, [str(a) for a in args])
    assert result.exit_code == code, result.output
    return result


def read(path):
    return json.loads(path.read_text())


def identity_checkpoint(tmp_path, n=8):
    model = PsfAttnModel.create(n, "temporal_order", ModelConfig(d=4, hidden=5, m_factors=3), seed=0)
    for mlp in model.factor_mlps:
        for value in mlp.params.values():
            value[...] = 0.0
        mlp.params["b1"][0] = 1.0
    save_model(model, str(tmp_path / "ckpt"))
    write_dataset(gen_temporal_order(n, 4, seed=0), str(tmp_path / "seqs"))
    return tmp_path / "ckpt", tmp_path / "seqs"


def test_pattern_command(runner, app, tmp_path):
    out = tmp_path / "p.json"
    run(runner, app, "pattern", 16, "--mode", "paper_literal", "--hops", 4, "--out", out)
    payload = read(out)
    assert payload["pattern"]["rows"][0] == [0, 1, 2, 4]
    assert payload["nnz_total"] == 256
    assert payload["density"] < 1.0


def test_compare_low_rank_goes_to_tsvd(runner, app, tmp_path):
    out = tmp_path / "report.json"
    run(runner, app, "compare", "--synth", "low_rank", "--synth-rank", 1, "--size", 32,
        "--max-iters", 200, "--out", out)
    report = read(out)
    assert report["winner"] == "tsvd"
    assert report["fro_err_tsvd"] <= 1e-8
    assert report["nnz_tsvd"] >= report["nnz_sf"]
    assert report["command"] == "compare" and report["seed"] == 0


def test_compare_saves_both_models(runner, app, tmp_path):
    run(runner, app, "compare", "--synth", "random_sparse", "--size", 8, "--max-iters", 30,
        "--save-dir", tmp_path / "models", "--out", tmp_path / "r.json")
    assert load_chain(str(tmp_path / "models" / "chain")).n == 8
    assert (tmp_path / "models" / "tsvd" / "u.f64").exists()


def test_compare_missing_file_exits_2(runner, app, tmp_path):
    run(runner, app, "compare", "--input", tmp_path / "missing.mtx", code=2)


def test_compare_needs_one_source(runner, app, tmp_path):
    path = tmp_path / "x.csv"
    np.savetxt(path, np.eye(4), delimiter=",")
    run(runner, app, "compare", "--input", path, "--synth", "identity", code=2)


def test_non_square_input_exits_2(runner, app, tmp_path):
    path = tmp_path / "wide.csv"
    path.write_text("1,2,3\n4,5,6\n")
    run(runner, app, "sf", "--input", path, code=2)


def test_tsvd_command(runner, app, tmp_path):
    out = tmp_path / "t.json"
    run(runner, app, "tsvd", "--synth", "low_rank", "--size", 12, "--rank", 3, "--out", out)
    payload = read(out)
    assert payload["r"] == 3 and payload["nnz"] == 2 * 12 * 3 + 3
    assert payload["fro_err"] <= 1e-8


def test_tsvd_budget_rule(runner, app, tmp_path):
    out = tmp_path / "t.json"
    run(runner, app, "tsvd", "--synth", "identity", "--size", 16, "--budget", 256, "--out", out)
    assert read(out)["r"] == 8


def test_sf_command_with_config_file(runner, app, tmp_path):
    config = tmp_path / "sf.yaml"
    config.write_text("sf:\n  max_iters: 5\n  learning_rate: 0.05\n")
    out = tmp_path / "fit.json"
    run(runner, app, "--config", config, "sf", "--synth", "identity", "--size", 8,
        "--save-dir", tmp_path / "chain", "--out", out)
    report = read(out)
    assert report["iterations_run"] <= 5
    assert report["m_factors"] == 3
    assert load_chain(str(tmp_path / "chain")).m == 3


def test_flags_override_config_file(runner, app, tmp_path):
    config = tmp_path / "sf.yaml"
    config.write_text("sf:\n  max_iters: 5\n")
    out = tmp_path / "fit.json"
    run(runner, app, "--config", config, "sf", "--synth", "identity", "--size", 8, "--max-iters", 2,
        "--no-history", "--out", out)
    report = read(out)
    assert report["iterations_run"] <= 2
    assert "loss_history" not in report


def test_unknown_config_section_exits_2(runner, app, tmp_path):
    config = tmp_path / "bad.yaml"
    config.write_text("solver:\n  max_iters: 5\n")
    run(runner, app, "--config", config, "pattern", 8, code=2)


def test_bad_thread_env_exits_2(runner, app, monkeypatch):
    monkeypatch.setenv("SF_THREADS", "many")
    run(runner, app, "pattern", 8, code=2)


def test_numeric_fault_exits_3_and_keeps_last_chain(runner, app, tmp_path):
    path = tmp_path / "huge.csv"
    np.savetxt(path, np.full((8, 8), 1e200), delimiter=",")
    run(runner, app, "sf", "--input", path, "--save-dir", tmp_path / "out", code=3)
    assert load_chain(str(tmp_path / "out" / "last_valid")).n == 8


def test_synth_is_byte_identical(runner, app, tmp_path):
    run(runner, app, "synth", "adding", 16, 50, "--seed", 7, "--out", tmp_path / "a")
    run(runner, app, "synth", "adding", 16, 50, "--seed", 7, "--out", tmp_path / "b")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert len((tmp_path / "a.csv").read_text().splitlines()) == 51
    assert read(tmp_path / "a.json")["task"] == "adding"


def test_synth_accepts_order_alias(runner, app, tmp_path):
    run(runner, app, "synth", "order", 8, 20, "--out", tmp_path / "o")
    assert read(tmp_path / "o.json")["task"] == "temporal_order"


def test_train_then_eval(runner, app, tmp_path):
    run(runner, app, "synth", "temporal_order", 8, 60, "--seed", 1, "--out", tmp_path / "train")
    run(runner, app, "train", "--data", tmp_path / "train", "--out", tmp_path / "ckpt", "--epochs", 2,
        "--d", 4, "--hidden", 5, "--m-factors", 3, "--batch-size", 20)
    metrics = read(tmp_path / "ckpt" / "metrics.json")
    epochs = metrics["runs"][0]["epochs"]
    assert [e["epoch"] for e in epochs] == [1, 2]
    assert set(epochs[0]) == {"epoch", "train_loss", "eval_accuracy", "wall_time_s"}

    out = tmp_path / "eval.json"
    run(runner, app, "eval", "--checkpoint", tmp_path / "ckpt", "--data", tmp_path / "train", "--out", out)
    payload = read(out)
    assert payload["accuracy"] == pytest.approx(epochs[-1]["eval_accuracy"])
    assert payload["count"] == 60


def test_eval_length_mismatch_exits_4(runner, app, tmp_path):
    ckpt, _ = identity_checkpoint(tmp_path)
    write_dataset(gen_temporal_order(9, 4, seed=0), str(tmp_path / "long"))
    run(runner, app, "eval", "--checkpoint", ckpt, "--data", tmp_path / "long", code=4)


def test_attn_row_of_identity_checkpoint(runner, app, tmp_path):
    ckpt, seqs = identity_checkpoint(tmp_path)
    out = tmp_path / "row.csv"
    run(runner, app, "attn-row", "--checkpoint", ckpt, "--data", seqs, "--row", 5, "--out", out)
    fields = out.read_text().strip().split(",")
    assert fields[0] == "5"
    np.testing.assert_array_equal(np.array(fields[1:], dtype=float), np.eye(8)[5])


def test_attn_map_grid(runner, app, tmp_path):
    ckpt, seqs = identity_checkpoint(tmp_path, n=16)
    out = tmp_path / "map.csv"
    run(runner, app, "attn-map", "--checkpoint", ckpt, "--data", seqs, "--rows", "0,5", "--out", out)
    grid = np.loadtxt(out, delimiter=",")
    assert grid.shape == (4, 4)
    np.testing.assert_array_equal(grid.reshape(-1), np.eye(16)[0] + np.eye(16)[5])


def test_benchmark_csv(runner, app, tmp_path):
    out = tmp_path / "bench.csv"
    run(runner, app, "benchmark", "--synth", "identity", "--synth", "low_rank", "--size", 8,
        "--max-iters", 20, "--out", out)
    lines = out.read_text().splitlines()
    assert lines[0] == "name,n,nnz_sf,nnz_tsvd,fro_err_tsvd,fro_err_sf,winner"
    assert len(lines) == 3
    assert all(line.split(",")[-1] in {"sf", "tsvd", "tie"} for line in lines[1:])


@pytest.mark.slow
def test_compare_identity_is_not_lost_by_sf(runner, app, tmp_path):
    out = tmp_path / "report.json"
    run(runner, app, "compare", "--synth", "identity", "--size", 16, "--out", out)
    report = read(out)
    assert report["fro_err_sf"] <= 1e-6
    assert report["winner"] in {"sf", "tie"}


@pytest.mark.slow
def test_planted_chains_favour_sf_and_low_rank_favours_tsvd(runner, app, tmp_path):
    planted = tmp_path / "planted.json"
    run(runner, app, "benchmark", "--synth", "planted_chain", "--size", 64, "--repeats", 10, "--out", planted)
    assert read(planted)["wins"].get("sf", 0) >= 8
    low = tmp_path / "low.json"
    run(runner, app, "benchmark", "--synth", "low_rank", "--size", 64, "--repeats", 10, "--out", low)
    assert read(low)["wins"].get("tsvd", 0) >= 9


@pytest.mark.slow
def test_random_sparse_favours_sf(runner, app, tmp_path):
    out = tmp_path / "sparse.json"
    run(runner, app, "benchmark", "--synth", "random_sparse", "--size", 64, "--repeats", 10, "--out", out)
    assert read(out)["wins"].get("sf", 0) >= 8
