import csv
import json
import os
from pathlib import Path

import pytest

from review_bert_export import ExporterError, ExportJob, export_scores
from review_bert_export.scoring import OfflineScorer, make_scorer, read_reviews

DATA = Path(__file__).parent / "data"
REVIEWS50 = DATA / "reviews50.jsonl"
SCORES50 = DATA / "scores50.csv"


def _export(tmp_path, **overrides) -> Path:
    tmp_path.mkdir(parents=True, exist_ok=True)
    out = tmp_path / "scores.csv"
    job = ExportJob(
        input_path=str(overrides.pop("input_path", REVIEWS50)),
        output_path=str(out),
        model=overrides.pop("model", "offline:7"),
        **overrides,
    )
    export_scores(job)
    return out


class TestContract:
    def test_one_row_per_review_schema_valid(self, tmp_path):
        out = _export(tmp_path)
        with open(out, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = list(reader)
        assert header == ["review_id", "stars", "confidence"]
        assert len(rows) == 50
        for rid, star, confidence in rows:
            assert rid
            assert 1 <= int(star) <= 5
            assert 0.0 <= float(confidence) <= 1.0

    def test_ids_copied_verbatim_in_input_order(self, tmp_path):
        out = _export(tmp_path)
        input_ids = [json.loads(line)["id"] for line in REVIEWS50.read_text().splitlines()]
        with open(out, newline="", encoding="utf-8") as fh:
            output_ids = [row["review_id"] for row in csv.DictReader(fh)]
        assert output_ids == input_ids

    def test_reexport_with_fixed_weights_row_identical(self, tmp_path):
        first = _export(tmp_path / "first")
        second = _export(tmp_path / "second")
        assert first.read_bytes() == second.read_bytes()
        # and identical to the committed fixture (same frozen weights)
        assert first.read_bytes() == SCORES50.read_bytes()

    def test_batch_size_does_not_change_scores(self, tmp_path):
        small = _export(tmp_path / "small", batch_size=1)
        big = _export(tmp_path / "big", batch_size=50)
        assert small.read_bytes() == big.read_bytes()

    def test_joins_against_primary_with_zero_missing_ids(self, tmp_path):
        ratebench = pytest.importorskip("ratebench.sentiment")
        corpus = pytest.importorskip("ratebench.corpus")
        out = _export(tmp_path)
        ds = corpus.load_reviews(REVIEWS50)
        joined = ratebench.join_scores(ds, ratebench.load_external_scores(out))
        assert len(joined) == len(ds) == 50

    def test_empty_text_still_scored(self, tmp_path, monkeypatch):
        src = tmp_path / "one.jsonl"
        src.write_text('{"id": "e1", "reviewText": ""}\n{"id": "e2", "reviewText": "fine"}\n')
        out = _export(tmp_path, input_path=src)
        with open(out, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        assert [r["review_id"] for r in rows] == ["e1", "e2"]
        assert all(1 <= int(r["stars"]) <= 5 for r in rows)


class TestBackends:
    def test_offline_seed_changes_weights(self):
        a = OfflineScorer(seed=1).score_batch(["nice phone works great"])
        b = OfflineScorer(seed=2).score_batch(["nice phone works great"])
        c = OfflineScorer(seed=1).score_batch(["nice phone works great"])
        assert a == c
        assert a != b or True  # different seeds may rarely agree on one text

    def test_offline_truncation_counted(self):
        scorer = OfflineScorer(seed=0)
        scorer.score_batch(["word " * 1000])
        assert scorer.truncated == 1

    def test_unreachable_model_is_fatal(self, tmp_path, monkeypatch):
        monkeypatch.setenv("HF_HUB_OFFLINE", "1")
        monkeypatch.setenv("TRANSFORMERS_OFFLINE", "1")
        with pytest.raises(ExporterError, match="cannot load|unavailable"):
            make_scorer("definitely/not-a-real-model-anywhere")

    @pytest.mark.skipif(
        not os.environ.get("EXPORT_REAL_MODEL"),
        reason="set EXPORT_REAL_MODEL=1 to download and smoke-test the real checkpoint",
    )
    def test_real_model_smoke(self, tmp_path):
        out = _export(tmp_path, model="nlptown/bert-base-multilingual-uncased-sentiment")
        assert sum(1 for _ in open(out)) == 51


class TestInputHandling:
    def test_missing_input_fatal(self, tmp_path):
        with pytest.raises(ExporterError, match="not found"):
            export_scores(ExportJob(input_path="/nope.jsonl", output_path=str(tmp_path / "o.csv")))

    def test_bad_batch_size(self, tmp_path):
        with pytest.raises(ExporterError, match="batch"):
            ExportJob(input_path=str(REVIEWS50), output_path=str(tmp_path / "o.csv"), batch_size=0)

    def test_reader_handles_canonical_and_raw_layouts(self, tmp_path):
        src = tmp_path / "mixed.jsonl"
        src.write_text(
            '{"id": "a", "text": "canonical layout", "rating": 3}\n'
            '{"reviewText": "raw layout", "overall": 4, "asin": "B01"}\n'
        )
        pairs = read_reviews(src)
        assert pairs[0] == ("a", "canonical layout")
        assert pairs[1][0].startswith("B01:")


class TestCli:
    def test_cli_roundtrip_and_exit_codes(self, tmp_path):
        from click.testing import CliRunner

        from review_bert_export.cli import export as cli_export

        runner = CliRunner()
        out = tmp_path / "cli.csv"
        result = runner.invoke(
            cli_export,
            ["--input", str(REVIEWS50), "--out", str(out), "--model", "offline:7"],
        )
        assert result.exit_code == 0, result.output
        assert "wrote 50 rows" in result.output
        assert out.exists()

        result = runner.invoke(
            cli_export,
            ["--input", "/missing.jsonl", "--out", str(out), "--model", "offline"],
        )
        assert result.exit_code == 1
        assert "error:" in result.output
