"""FastAPI service wrapping the workbench core.

Every endpoint is a thin adapter: parse the request model, call into the
core package, map exceptions to structured HTTP errors (400 validation,
404 missing file, 422 bad data, 500 runtime). The CLI talks to this app
through an in-process transport by default, or over the network against
``ratebench serve``.
"""

from __future__ import annotations

import dataclasses
from pathlib import Path

import numpy as np
import yaml
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, ciscore, runner
from ..classify import ModelSpec, load_model, save_model, train
from ..corpus import (
    balanced_sample,
    clean_dataset,
    labels_for,
    load_reviews,
    load_split,
    load_stopwords,
    save_dataset,
    save_split,
    stratified_split,
)
from ..embed import count_transform, fit_vocabulary, load_doc_matrix, save_doc_matrix, tfidf_transform
from ..errors import ConfigError, DataError, WorkbenchError
from ..evalreport import accuracy as compute_accuracy
from ..evalreport import confusion as compute_confusion
from ..sentiment import join_scores, load_external_scores, load_lexicon, save_scores, score_dataset
from ..word2vec import W2VConfig, doc_embed, save_word_vectors, train_word2vec
from . import schemas
from ..embed import DocMatrix


def create_app() -> FastAPI:
    app = FastAPI(title="ratebench", version=__version__)

    @app.exception_handler(ConfigError)
    async def _config_error(request: Request, exc: ConfigError):
        return JSONResponse(status_code=400, content={"kind": "validation", "message": str(exc)})

    @app.exception_handler(DataError)
    async def _data_error(request: Request, exc: DataError):
        return JSONResponse(status_code=422, content={"kind": "runtime", "message": str(exc)})

    @app.exception_handler(WorkbenchError)
    async def _workbench_error(request: Request, exc: WorkbenchError):
        return JSONResponse(status_code=500, content={"kind": "runtime", "message": str(exc)})

    @app.exception_handler(FileNotFoundError)
    async def _missing_file(request: Request, exc: FileNotFoundError):
        return JSONResponse(
            status_code=404, content={"kind": "runtime", "message": f"file not found: {exc.filename}"}
        )

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/corpus/ingest", response_model=schemas.IngestResponse)
    def ingest(req: schemas.IngestRequest):
        ds = load_reviews(req.input_path, name=req.name)
        ds = clean_dataset(ds, load_stopwords(req.stopwords_path))
        if req.per_class is not None:
            ds = balanced_sample(ds, req.per_class, req.seed)
        out = Path(req.out_dir) / f"{ds.name}.jsonl"
        save_dataset(ds, out)
        return schemas.IngestResponse(
            dataset_path=str(out),
            n_reviews=len(ds),
            skipped_records=ds.skipped_records,
            class_counts=ds.class_counts(),
        )

    @app.post("/corpus/split", response_model=schemas.SplitResponse)
    def split(req: schemas.SplitRequest):
        ds = load_reviews(req.dataset_path)
        index = stratified_split(ds, req.test_fraction, req.seed)
        save_split(index, req.out_path)
        return schemas.SplitResponse(
            split_path=req.out_path,
            n_train=len(index.train_ids),
            n_test=len(index.test_ids),
        )

    @app.post("/embeddings/build", response_model=schemas.EmbedResponse)
    def build_embedding(req: schemas.EmbedRequest):
        method = req.method.strip().lower()
        if method not in ("count", "tfidf", "word2vec"):
            raise ConfigError(f"unknown embedding method {req.method!r}")
        ds = load_reviews(req.dataset_path)
        if any(not r.text_clean for r in ds.reviews):
            ds = clean_dataset(ds, load_stopwords())
        docs = [r.text_clean for r in ds.reviews]
        ids = ds.ids()
        fit_docs = docs
        if req.split_path:
            split_index = load_split(req.split_path)
            fit_docs = [d for d, rid in zip(docs, ids) if rid in split_index.train_ids]
        vectors_path = None
        if method == "word2vec":
            unknown = set(req.word2vec) - set(W2VConfig.__dataclass_fields__)
            if unknown:
                raise ConfigError(f"unknown word2vec options {sorted(unknown)}")
            wv = train_word2vec(fit_docs, W2VConfig(**req.word2vec))
            matrix = DocMatrix(values=np.vstack([doc_embed(d, wv) for d in docs]), row_ids=tuple(ids))
            if req.vectors_out:
                save_word_vectors(wv, req.vectors_out)
                vectors_path = req.vectors_out
        else:
            vocab = fit_vocabulary(fit_docs, min_df=req.min_df, max_features=req.max_features)
            transform = count_transform if method == "count" else tfidf_transform
            matrix = transform(docs, vocab, ids)
        save_doc_matrix(matrix, req.out_path)
        return schemas.EmbedResponse(
            matrix_path=req.out_path,
            n_docs=matrix.n_docs,
            n_features=matrix.n_features,
            vectors_path=vectors_path,
        )

    @app.post("/sentiment/score", response_model=schemas.SentimentResponse)
    def sentiment_score(req: schemas.SentimentRequest):
        engine = req.engine.strip().lower()
        ds = load_reviews(req.dataset_path)
        if engine == "vader":
            scores = score_dataset(ds, load_lexicon(req.lexicon_path))
        elif engine == "external":
            if not req.scores_path:
                raise ConfigError("engine 'external' needs scores_path")
            scores = join_scores(ds, load_external_scores(req.scores_path))
        else:
            raise ConfigError(f"unknown sentiment engine {req.engine!r}")
        save_scores(scores, req.out_path)
        return schemas.SentimentResponse(
            scores_path=req.out_path, n_scored=len(scores), engine=engine
        )

    def _matrix_with_scores(req) -> tuple[np.ndarray, tuple[str, ...]]:
        matrix = load_doc_matrix(req.matrix_path)
        values = matrix.values
        if req.scores_path:
            ext = load_external_scores(req.scores_path)
            missing = [rid for rid in matrix.row_ids if rid not in ext.stars]
            if missing:
                raise DataError(f"score file missing ids: {missing[:10]}")
            column = np.array([float(ext.stars[rid]) for rid in matrix.row_ids])
            values = np.hstack([values, column[:, np.newaxis]])
        return values, matrix.row_ids

    @app.post("/models/train", response_model=schemas.TrainResponse)
    def train_model(req: schemas.TrainRequest):
        values, row_ids = _matrix_with_scores(req)
        ds = load_reviews(req.dataset_path)
        split_index = load_split(req.split_path)
        train_idx = [i for i, rid in enumerate(row_ids) if rid in split_index.train_ids]
        labels = labels_for(ds, [row_ids[i] for i in train_idx])
        spec = ModelSpec(family=req.family.strip().upper(), hyperparameters=req.hyperparameters, seed=req.seed)
        model = train(spec, values[train_idx], labels)
        save_model(model, req.out_path)
        return schemas.TrainResponse(
            model_path=req.out_path,
            family=model.family,
            n_train=len(train_idx),
            parameter_count=model.parameter_count(),
        )

    @app.post("/models/evaluate", response_model=schemas.EvaluateResponse)
    def evaluate_model(req: schemas.EvaluateRequest):
        values, row_ids = _matrix_with_scores(req)
        ds = load_reviews(req.dataset_path)
        split_index = load_split(req.split_path)
        test_idx = [i for i, rid in enumerate(row_ids) if rid in split_index.test_ids]
        truth = labels_for(ds, [row_ids[i] for i in test_idx])
        model = load_model(req.model_path)
        pred = model.predict(values[test_idx])
        acc = compute_accuracy(pred, truth)
        cm = compute_confusion(pred, truth)
        confusion_path = None
        if req.confusion_out:
            path = Path(req.confusion_out)
            path.parent.mkdir(parents=True, exist_ok=True)
            lines = ["true\\pred,1,2,3,4,5"]
            lines += [f"{star}," + ",".join(str(v) for v in cm.matrix[star - 1]) for star in range(1, 6)]
            path.write_text("\n".join(lines) + "\n", "utf-8")
            confusion_path = str(path)
        return schemas.EvaluateResponse(
            accuracy=acc,
            n_test=len(test_idx),
            confusion=cm.matrix.tolist(),
            confusion_path=confusion_path,
        )

    def _ci_response(result: ciscore.CiResult) -> schemas.CiScoreResponse:
        return schemas.CiScoreResponse(
            name=result.name,
            ci=result.ci,
            constituents=[schemas.CiConstituent(name=n, score=s) for n, s in result.constituents],
        )

    @app.post("/ci/score", response_model=schemas.CiScoreResponse)
    def ci_score(req: schemas.CiScoreRequest):
        table = ciscore.load_table(req.table_path)
        if bool(req.pipeline) == bool(req.model):
            raise ConfigError("provide exactly one of 'pipeline' or 'model'")
        if req.pipeline:
            result = ciscore.composite_ci(ciscore.parse_pipeline(req.pipeline), table, req.recompute)
            return _ci_response(result)
        name = req.model.strip().upper()
        value = ciscore.interpretability_score(name, table, req.recompute)
        return schemas.CiScoreResponse(
            name=name, ci=value, constituents=[schemas.CiConstituent(name=name, score=value)]
        )

    @app.post("/ci/enumerate", response_model=schemas.CiEnumerateResponse)
    def ci_enumerate(req: schemas.CiEnumerateRequest):
        table = ciscore.load_table(req.table_path)
        results = ciscore.enumerate_pipelines(table, recompute=req.recompute)
        out_path = None
        if req.out_path:
            ciscore.save_ci_results(results, req.out_path)
            out_path = req.out_path
        return schemas.CiEnumerateResponse(
            results=[_ci_response(r) for r in results], out_path=out_path
        )

    def _resolve_config(config_path: str | None, inline: dict | None) -> runner.RunConfig:
        if bool(config_path) == bool(inline is not None):
            raise ConfigError("provide exactly one of 'config_path' or inline 'config'")
        if config_path:
            return runner.load_config(config_path)
        return runner.config_from_mapping(inline)

    @app.post("/experiments/validate", response_model=schemas.ValidateResponse)
    def validate(req: schemas.ValidateRequest):
        try:
            cfg = _resolve_config(req.config_path, req.config)
        except ConfigError as exc:
            return schemas.ValidateResponse(ok=False, errors=[str(exc)], warnings=[])
        except FileNotFoundError as exc:
            return schemas.ValidateResponse(
                ok=False, errors=[f"config file not found: {exc.filename}"], warnings=[]
            )
        except yaml.YAMLError as exc:
            return schemas.ValidateResponse(ok=False, errors=[f"invalid YAML: {exc}"], warnings=[])
        errors, warnings = runner.validate_config(cfg)
        return schemas.ValidateResponse(ok=not errors, errors=errors, warnings=warnings)

    @app.post("/experiments/run", response_model=schemas.RunResponse)
    def run_experiment(req: schemas.RunRequest):
        cfg = _resolve_config(req.config_path, req.config)
        updates = {}
        if req.jobs is not None:
            updates["jobs"] = req.jobs
        if req.out_dir is not None:
            updates["out_dir"] = req.out_dir
        if req.seed is not None:
            updates["seed"] = req.seed
        if updates:
            cfg = dataclasses.replace(cfg, **updates)
        manifest = runner.run_experiment(cfg)
        report_dir = Path(cfg.out_dir) / "report"
        return schemas.RunResponse(
            out_dir=cfg.out_dir,
            manifest_path=str(Path(cfg.out_dir) / "manifest.json"),
            n_cells=len(manifest["cells"]),
            cells=[
                schemas.CellSummary(
                    dataset=c["dataset"], pipeline=c["pipeline"], ci=c["ci"], accuracy=c["accuracy"]
                )
                for c in manifest["cells"]
            ],
            report_files=sorted(str(p) for p in report_dir.iterdir()) if report_dir.exists() else [],
        )

    @app.post("/reports/render", response_model=schemas.ReportResponse)
    def render_report(req: schemas.ReportRequest):
        import json as _json

        manifest = _json.loads(Path(req.manifest_path).read_text("utf-8"))
        out_dir = req.out_dir or str(Path(req.manifest_path).parent / "report")
        files = runner.emit_from_manifest(manifest, out_dir)
        return schemas.ReportResponse(files=sorted(str(p) for p in files))

    return app


app = create_app()
