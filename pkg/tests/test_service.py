import json

import pytest
from fastapi.testclient import TestClient

from ratebench.service.app import create_app

from .conftest import SYNTHETIC_REVIEWS, SYNTHETIC_SCORES, make_records


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


@pytest.fixture
def ingested(client, tmp_path, write_jsonl):
    """Ingest a small balanced corpus and split it; returns the paths."""
    raw = write_jsonl(make_records({s: 8 for s in range(1, 6)}, text="good solid phone love it"))
    r = client.post(
        "/corpus/ingest",
        json={"input_path": str(raw), "out_dir": str(tmp_path), "per_class": 6, "seed": 1},
    )
    assert r.status_code == 200, r.text
    dataset_path = r.json()["dataset_path"]
    split_path = str(tmp_path / "split.json")
    r = client.post(
        "/corpus/split",
        json={"dataset_path": dataset_path, "out_path": split_path, "test_fraction": 0.5, "seed": 2},
    )
    assert r.status_code == 200, r.text
    return dataset_path, split_path


class TestHealthAndErrors:
    def test_health(self, client):
        body = client.get("/health").json()
        assert body["status"] == "ok"

    def test_validation_error_maps_to_400(self, client):
        r = client.post("/ci/score", json={"pipeline": "TFIDF+GBM"})
        assert r.status_code == 400
        assert r.json()["kind"] == "validation"

    def test_missing_file_maps_to_404(self, client):
        r = client.post("/corpus/split", json={"dataset_path": "/nope.jsonl", "out_path": "/tmp/x"})
        assert r.status_code == 404

    def test_bad_data_maps_to_422(self, client, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("review_id,stars\nr1,9\n")
        r = client.post(
            "/sentiment/score",
            json={"dataset_path": str(SYNTHETIC_REVIEWS), "engine": "external",
                  "scores_path": str(bad), "out_path": str(tmp_path / "o.csv")},
        )
        assert r.status_code == 422


class TestCorpusEndpoints:
    def test_ingest_balances_and_reports(self, client, tmp_path, write_jsonl):
        raw = write_jsonl(make_records({1: 5, 2: 4, 3: 4, 4: 6, 5: 4}))
        r = client.post(
            "/corpus/ingest",
            json={"input_path": str(raw), "out_dir": str(tmp_path), "per_class": 3},
        )
        body = r.json()
        assert body["n_reviews"] == 15
        assert set(body["class_counts"].values()) == {3}

    def test_split_counts(self, ingested):
        pass  # the fixture itself asserts both endpoints succeed


class TestPipelineEndpoints:
    def test_embed_train_evaluate_flow(self, client, tmp_path, ingested):
        dataset_path, split_path = ingested
        matrix_path = str(tmp_path / "m.csv")
        r = client.post(
            "/embeddings/build",
            json={"dataset_path": dataset_path, "method": "tfidf", "out_path": matrix_path,
                  "split_path": split_path, "min_df": 1},
        )
        assert r.status_code == 200, r.text
        assert r.json()["n_docs"] == 30

        model_path = str(tmp_path / "model.json")
        r = client.post(
            "/models/train",
            json={"matrix_path": matrix_path, "dataset_path": dataset_path,
                  "split_path": split_path, "family": "NB", "out_path": model_path},
        )
        assert r.status_code == 200, r.text
        assert r.json()["parameter_count"] > 0

        r = client.post(
            "/models/evaluate",
            json={"matrix_path": matrix_path, "dataset_path": dataset_path,
                  "split_path": split_path, "model_path": model_path,
                  "confusion_out": str(tmp_path / "cm.csv")},
        )
        assert r.status_code == 200, r.text
        body = r.json()
        assert 0.0 <= body["accuracy"] <= 1.0
        assert len(body["confusion"]) == 5
        assert (tmp_path / "cm.csv").exists()

    def test_sentiment_vader(self, client, tmp_path, ingested):
        dataset_path, _ = ingested
        out = str(tmp_path / "scores.csv")
        r = client.post(
            "/sentiment/score",
            json={"dataset_path": dataset_path, "engine": "vader", "out_path": out},
        )
        assert r.status_code == 200
        assert r.json()["n_scored"] == 30

    def test_word2vec_embedding(self, client, tmp_path, ingested):
        dataset_path, split_path = ingested
        r = client.post(
            "/embeddings/build",
            json={"dataset_path": dataset_path, "method": "word2vec",
                  "out_path": str(tmp_path / "w.csv"),
                  "word2vec": {"dim": 8, "epochs": 1, "min_count": 1},
                  "vectors_out": str(tmp_path / "vectors.txt")},
        )
        assert r.status_code == 200, r.text
        assert r.json()["n_features"] == 8
        assert (tmp_path / "vectors.txt").exists()


class TestCiEndpoints:
    def test_score_pipeline(self, client):
        r = client.post("/ci/score", json={"pipeline": "TFIDF+LR-BS"})
        body = r.json()
        assert body["ci"] == pytest.approx(1.72)
        assert [c["name"] for c in body["constituents"]] == ["TFIDF", "BERT", "LR"]

    def test_score_single_model(self, client):
        r = client.post("/ci/score", json={"model": "VADER", "recompute": True})
        assert r.json()["ci"] == pytest.approx(0.2047, abs=1e-4)

    def test_requires_exactly_one_target(self, client):
        assert client.post("/ci/score", json={}).status_code == 400
        assert client.post("/ci/score", json={"pipeline": "VADER", "model": "NB"}).status_code == 400

    def test_enumerate_26(self, client, tmp_path):
        out = str(tmp_path / "ci.csv")
        r = client.post("/ci/enumerate", json={"out_path": out})
        body = r.json()
        assert len(body["results"]) == 26
        assert body["out_path"] == out
        lines = (tmp_path / "ci.csv").read_text().splitlines()
        assert len(lines) == 27


class TestExperimentEndpoints:
    def test_validate_inline_config(self, client):
        r = client.post(
            "/experiments/validate",
            json={"config": {"datasets": [{"path": str(SYNTHETIC_REVIEWS)}],
                             "pipelines": ["VADER"]}},
        )
        body = r.json()
        assert body["ok"] is True

    def test_validate_reports_errors(self, client):
        r = client.post(
            "/experiments/validate",
            json={"config": {"datasets": [{"path": "/missing.jsonl"}], "pipelines": ["VADER"]}},
        )
        body = r.json()
        assert body["ok"] is False
        assert body["errors"]

    def test_run_and_render_report(self, client, tmp_path):
        out_dir = str(tmp_path / "run")
        r = client.post(
            "/experiments/run",
            json={"config": {
                "datasets": [{"name": "synth", "path": str(SYNTHETIC_REVIEWS),
                              "scores": str(SYNTHETIC_SCORES)}],
                "per_class": 30,
                "pipelines": ["VADER", "BERT"],
                "out_dir": out_dir,
            }},
        )
        assert r.status_code == 200, r.text
        body = r.json()
        assert body["n_cells"] == 2
        assert any(f.endswith("tradeoff.csv") for f in body["report_files"])

        r = client.post(
            "/reports/render",
            json={"manifest_path": body["manifest_path"], "out_dir": str(tmp_path / "rerender")},
        )
        assert r.status_code == 200
        assert any(f.endswith("tradeoff.csv") for f in r.json()["files"])
