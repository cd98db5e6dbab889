import hashlib
import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from evigraph.cli import main

DATA = Path(__file__).parent / "data"

FAST_CONFIG = {
    "node_dim": 8, "attention_dim": 8, "encoder_dim": 16, "encoder_layers": 1,
    "rel_window": 4, "max_seq_len": 64, "learning_rate": 1e-3, "batch_size": 4,
    "stage1_epochs": 2, "stage2_epochs": 1, "seed": 3,
}


@pytest.fixture()
def runner():
    return CliRunner()


def digest_dir(path: Path) -> dict:
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest()
            for p in sorted(path.iterdir())}


class TestBuildGraph:
    def test_happy_path(self, runner):
        result = runner.invoke(main, ["build-graph", "--input", str(DATA / "fig3_srl.json")])
        assert result.exit_code == 0
        graph = json.loads(result.output)
        assert len(graph["nodes"]) == 9
        assert len(graph["edges"]) == 13

    def test_claim_origin(self, runner):
        result = runner.invoke(main, ["build-graph", "--input", str(DATA / "fig3_srl.json"),
                                      "--origin", "claim"])
        assert result.exit_code == 0
        assert len(json.loads(result.output)["nodes"]) == 3

    def test_missing_file(self, runner):
        result = runner.invoke(main, ["build-graph", "--input", "missing.json"])
        assert result.exit_code == 1

    def test_unknown_flag_is_usage_error(self, runner):
        result = runner.invoke(main, ["build-graph", "--nope", "x"])
        assert result.exit_code == 2


class TestSort:
    def test_outputs_orders(self, runner):
        result = runner.invoke(main, ["sort", "--input", str(DATA / "fig3_srl.json")])
        assert result.exit_code == 0
        out = json.loads(result.output)
        assert out["sentence_order"] == ["e0", "e1"]
        assert sorted(out["node_order"]) == list(range(9))


class TestSynth:
    def test_byte_identical_under_same_seed(self, runner, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        r1 = runner.invoke(main, ["synth", "--out", str(a), "--n", "30",
                                  "--n-dev", "9", "--seed", "7"])
        r2 = runner.invoke(main, ["synth", "--out", str(b), "--n", "30",
                                  "--n-dev", "9", "--seed", "7"])
        assert r1.exit_code == 0 and r2.exit_code == 0
        assert digest_dir(a) == digest_dir(b)


class TestRetrieveSelect:
    def test_retrieve(self, runner, tmp_path):
        runner.invoke(main, ["synth", "--out", str(tmp_path), "--n", "6",
                             "--n-dev", "3", "--seed", "1"])
        result = runner.invoke(main, [
            "retrieve", "--claim", "Alric was born in Marston",
            "--corpus", str(tmp_path / "corpus.jsonl"), "--m", "3",
        ])
        assert result.exit_code == 0
        docs = json.loads(result.output)["documents"]
        assert "Alric" in docs and "Marston" in docs

    def test_select(self, runner, tmp_path):
        runner.invoke(main, ["synth", "--out", str(tmp_path), "--n", "6",
                             "--n-dev", "3", "--seed", "1"])
        result = runner.invoke(main, [
            "select", "--claim", "Alric was born in Marston",
            "--corpus", str(tmp_path / "corpus.jsonl"), "--k", "3",
        ])
        assert result.exit_code == 0
        evidence = json.loads(result.output)["evidence"]
        assert evidence[0][:2] == ["Alric", 0]


class TestTrainPredictEvaluate:
    def test_full_cycle(self, runner, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps(FAST_CONFIG))
        runner.invoke(main, ["synth", "--out", str(tmp_path), "--n", "12",
                             "--n-dev", "6", "--seed", "2"])
        train_result = runner.invoke(main, [
            "train", "--data", str(tmp_path / "train.jsonl"),
            "--srl", str(tmp_path / "srl.jsonl"),
            "--out", str(tmp_path / "model.ck.json"),
            "--config", str(config), "--mode", "no_both",
        ])
        assert train_result.exit_code == 0, train_result.output
        summary = json.loads(train_result.output)
        assert summary["epochs"] == 3

        predict_result = runner.invoke(main, [
            "predict", "--checkpoint", str(tmp_path / "model.ck.json"),
            "--srl", str(tmp_path / "srl.jsonl"),
            "--out", str(tmp_path / "preds.jsonl"), "--jobs", "2",
        ])
        assert predict_result.exit_code == 0, predict_result.output

        # predictions cover train+dev; evaluate against the concatenation
        gold = tmp_path / "gold.jsonl"
        gold.write_bytes((tmp_path / "train.jsonl").read_bytes()
                         + (tmp_path / "dev.jsonl").read_bytes())
        eval_result = runner.invoke(main, [
            "evaluate", "--preds", str(tmp_path / "preds.jsonl"),
            "--gold", str(gold),
        ])
        assert eval_result.exit_code == 0, eval_result.output
        report = json.loads(eval_result.stdout)
        assert 0.0 <= report["fever_score"] <= report["label_accuracy"] <= 1.0
        assert "label_accuracy" in eval_result.stderr  # human table on stderr

    def test_predict_output_sorted_by_instance_id(self, runner, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps(FAST_CONFIG))
        runner.invoke(main, ["synth", "--out", str(tmp_path), "--n", "6",
                             "--n-dev", "3", "--seed", "2"])
        runner.invoke(main, [
            "train", "--data", str(tmp_path / "train.jsonl"),
            "--srl", str(tmp_path / "srl.jsonl"),
            "--out", str(tmp_path / "model.ck.json"),
            "--config", str(config), "--mode", "no_both",
        ])
        for jobs in ("1", "3"):
            result = runner.invoke(main, [
                "predict", "--checkpoint", str(tmp_path / "model.ck.json"),
                "--srl", str(tmp_path / "srl.jsonl"), "--jobs", jobs,
            ])
            ids = [json.loads(line)["instance_id"]
                   for line in result.output.strip().splitlines()]
            assert ids == sorted(ids)

    def test_evaluate_missing_file(self, runner, tmp_path):
        result = runner.invoke(main, ["evaluate", "--preds", "p.jsonl",
                                      "--gold", str(tmp_path / "missing.jsonl")])
        assert result.exit_code == 1
        assert "not found" in result.output


class TestHelp:
    @pytest.mark.parametrize("command", [
        [], ["build-graph"], ["sort"], ["retrieve"], ["select"], ["train"],
        ["predict"], ["evaluate"], ["synth"], ["ablate"], ["serve"],
    ])
    def test_help_exits_zero(self, runner, command):
        result = runner.invoke(main, command + ["--help"])
        assert result.exit_code == 0


class TestAblate:
    def test_four_variants_reported(self, runner, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({**FAST_CONFIG,
                                      "stage1_epochs": 1, "stage2_epochs": 1}))
        runner.invoke(main, ["synth", "--out", str(tmp_path), "--n", "9",
                             "--n-dev", "3", "--seed", "4"])
        result = runner.invoke(main, [
            "ablate", "--data", str(tmp_path / "train.jsonl"),
            "--dev", str(tmp_path / "dev.jsonl"),
            "--srl", str(tmp_path / "srl.jsonl"),
            "--config", str(config),
        ])
        assert result.exit_code == 0, result.output
        report = json.loads(result.stdout)
        assert set(report["variants"]) == {"full", "no_reorder", "no_graph", "no_both"}
        for row in report["variants"].values():
            assert 0.0 <= row["dev_accuracy"] <= 1.0
        # comparison table goes to stderr
        assert "no_both" in result.stderr


class TestConfigEnv:
    def test_env_var_supplies_default_config(self, tmp_path, monkeypatch):
        from evigraph.cli import _load_cfg

        path = tmp_path / "conf.json"
        path.write_text(json.dumps({"node_dim": 24, "seed": 11}))
        monkeypatch.setenv("EVIGRAPH_CONFIG", str(path))
        cfg = _load_cfg(None, None)
        assert cfg.node_dim == 24 and cfg.seed == 11

    def test_seed_flag_overrides_file(self, tmp_path, monkeypatch):
        from evigraph.cli import _load_cfg

        path = tmp_path / "conf.json"
        path.write_text(json.dumps({"seed": 11}))
        monkeypatch.setenv("EVIGRAPH_CONFIG", str(path))
        assert _load_cfg(None, 99).seed == 99
