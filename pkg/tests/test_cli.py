import json

import pytest
import yaml
from click.testing import CliRunner

from ratebench.cli import main

from .conftest import SYNTHETIC_REVIEWS, make_records


@pytest.fixture
def runner():
    return CliRunner()


def _invoke(runner, *args):
    result = runner.invoke(main, list(args), catch_exceptions=False)
    return result


class TestCiCommands:
    def test_ci_score_pipeline(self, runner):
        result = _invoke(runner, "ci", "score", "--pipeline", "TFIDF+LR-BS")
        assert result.exit_code == 0
        assert json.loads(result.output)["ci"] == pytest.approx(1.72)

    def test_ci_enumerate_writes_csv(self, runner, tmp_path):
        out = tmp_path / "ci.csv"
        result = _invoke(runner, "ci", "enumerate", "--out", str(out))
        assert result.exit_code == 0
        assert len(json.loads(result.output)["results"]) == 26
        assert out.exists()

    def test_unknown_pipeline_exits_1(self, runner):
        result = _invoke(runner, "ci", "score", "--pipeline", "TFIDF+GBM")
        assert result.exit_code == 1
        assert "validation" in result.output


class TestCorpusCommands:
    def test_ingest_then_split(self, runner, tmp_path, write_jsonl):
        raw = write_jsonl(make_records({s: 4 for s in range(1, 6)}))
        result = _invoke(runner, "ingest", "--input", str(raw), "--out", str(tmp_path),
                         "--per-class", "3", "--name", "toy")
        assert result.exit_code == 0, result.output
        dataset_path = json.loads(result.output)["dataset_path"]

        result = _invoke(runner, "split", "--dataset", dataset_path,
                         "--out", str(tmp_path / "split.json"), "--test-frac", "0.4")
        assert result.exit_code == 0
        body = json.loads(result.output)
        assert body["n_train"] + body["n_test"] == 15

    def test_missing_input_exits_2(self, runner, tmp_path):
        result = _invoke(runner, "ingest", "--input", "/missing.jsonl", "--out", str(tmp_path))
        assert result.exit_code == 2


class TestPipelineCommands:
    def test_embed_train_eval_chain(self, runner, tmp_path, write_jsonl):
        raw = write_jsonl(make_records({s: 6 for s in range(1, 6)}, text="love this great phone"))
        out = json.loads(_invoke(runner, "ingest", "--input", str(raw), "--out", str(tmp_path)).output)
        dataset = out["dataset_path"]
        split_path = str(tmp_path / "s.json")
        _invoke(runner, "split", "--dataset", dataset, "--out", split_path)
        matrix = str(tmp_path / "m.csv")
        result = _invoke(runner, "embed", "--dataset", dataset, "--method", "count",
                         "--out", matrix, "--split", split_path, "--min-df", "1")
        assert result.exit_code == 0, result.output
        model = str(tmp_path / "model.json")
        result = _invoke(runner, "train", "--matrix", matrix, "--dataset", dataset,
                         "--split", split_path, "--family", "NB", "--out", model)
        assert result.exit_code == 0, result.output
        result = _invoke(runner, "eval", "--matrix", matrix, "--dataset", dataset,
                         "--split", split_path, "--model", model)
        assert result.exit_code == 0
        assert 0.0 <= json.loads(result.output)["accuracy"] <= 1.0

    def test_sentiment_score(self, runner, tmp_path, write_jsonl):
        raw = write_jsonl(make_records({1: 2, 5: 2}, text="love it, great!"))
        out = json.loads(_invoke(runner, "ingest", "--input", str(raw), "--out", str(tmp_path)).output)
        result = _invoke(runner, "sentiment", "score", "--dataset", out["dataset_path"],
                         "--out", str(tmp_path / "scores.csv"))
        assert result.exit_code == 0
        assert json.loads(result.output)["n_scored"] == 4


class TestRunCommands:
    def test_validate_ok_and_failing(self, runner, tmp_path):
        good = tmp_path / "good.yaml"
        good.write_text(yaml.safe_dump({
            "datasets": [{"path": str(SYNTHETIC_REVIEWS)}], "pipelines": ["VADER"],
            "out_dir": str(tmp_path / "o"),
        }))
        result = _invoke(runner, "validate", "--config", str(good))
        assert result.exit_code == 0
        assert "config ok" in result.output

        bad = tmp_path / "bad.yaml"
        bad.write_text(yaml.safe_dump({"datasets": [{"path": "/missing.jsonl"}]}))
        result = _invoke(runner, "validate", "--config", str(bad))
        assert result.exit_code == 1
        assert "error:" in result.output

    def test_run_then_report(self, runner, tmp_path):
        config = tmp_path / "run.yaml"
        config.write_text(yaml.safe_dump({
            "datasets": [{"name": "synth", "path": str(SYNTHETIC_REVIEWS)}],
            "per_class": 20,
            "pipelines": ["VADER"],
            "out_dir": str(tmp_path / "out"),
        }))
        result = _invoke(runner, "run", "--config", str(config))
        assert result.exit_code == 0, result.output
        manifest_path = json.loads(result.output)["manifest_path"]

        result = _invoke(runner, "report", "--manifest", manifest_path,
                         "--out", str(tmp_path / "report2"))
        assert result.exit_code == 0
        assert (tmp_path / "report2" / "tradeoff.csv").exists()
