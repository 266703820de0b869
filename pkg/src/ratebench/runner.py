"""Experiment orchestration: expand a run config over the pipeline grid,
execute ingest -> embed -> sentiment -> train -> evaluate -> report, and
cache slow intermediates (word vectors, fitted models) on disk.

Every cell of the (dataset x pipeline) grid is a pure function of the
config and its seeds, so reruns produce byte-identical manifests and
report files; wall-clock timings and cache hits go to a separate
``execution.json`` that is allowed to differ between runs.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np
import yaml

from . import __version__, ciscore, evalreport
from .classify import ModelSpec, load_model, save_model, train
from .corpus import (
    Dataset,
    balanced_sample,
    clean_dataset,
    load_reviews,
    load_stopwords,
    stratified_split,
)
from .embed import count_transform, fit_vocabulary, tfidf_transform
from .errors import ConfigError, DataError
from .sentiment import (
    ExternalScoreFile,
    join_scores,
    load_external_scores,
    load_lexicon,
    score_dataset,
    star_class,
)
from .word2vec import W2VConfig, WordVectors, doc_embed, load_word_vectors, save_word_vectors, train_word2vec

CACHE_ENV = "RATEBENCH_CACHE"


@dataclass(frozen=True)
class DatasetEntry:
    name: str
    path: str
    scores: str | None = None


@dataclass(frozen=True)
class RunConfig:
    datasets: tuple[DatasetEntry, ...]
    per_class: int | None = None
    seed: int = 42
    test_fraction: float = 0.3
    pipelines: tuple[str, ...] | None = None  # None selects the full grid
    out_dir: str = "out"
    cache_dir: str | None = None
    jobs: int = 1
    table_path: str | None = None
    recompute_ci: bool = False
    correlation_scope: str = "both"  # test | full | both
    stopwords_path: str | None = None
    lexicon_path: str | None = None
    min_df: int = 2
    max_features: int | None = None
    word2vec: dict = field(default_factory=dict)
    hyperparameters: dict = field(default_factory=dict)  # family -> overrides


def config_from_mapping(payload: dict, source: str = "<config>") -> RunConfig:
    if not isinstance(payload, dict):
        raise ConfigError(f"{source}: run config must be a mapping")
    known = {f for f in RunConfig.__dataclass_fields__}
    unknown = set(payload) - known
    if unknown:
        raise ConfigError(f"{source}: unknown config keys {sorted(unknown)}")
    raw_datasets = payload.get("datasets") or []
    datasets = []
    for i, entry in enumerate(raw_datasets):
        if not isinstance(entry, dict) or "path" not in entry:
            raise ConfigError(f"{source}: datasets[{i}] needs at least a 'path'")
        datasets.append(
            DatasetEntry(
                name=str(entry.get("name") or Path(entry["path"]).stem),
                path=str(entry["path"]),
                scores=str(entry["scores"]) if entry.get("scores") else None,
            )
        )
    fields = {k: v for k, v in payload.items() if k != "datasets"}
    if "pipelines" in fields and fields["pipelines"] is not None:
        fields["pipelines"] = tuple(str(p) for p in fields["pipelines"])
    return RunConfig(datasets=tuple(datasets), **fields)


def load_config(path: str | Path) -> RunConfig:
    """Parse the YAML run configuration."""
    payload = yaml.safe_load(Path(path).read_text("utf-8"))
    return config_from_mapping(payload, source=str(path))


def selected_pipelines(cfg: RunConfig, table: ciscore.InterpretabilityTable) -> list[ciscore.CiResult]:
    every = ciscore.enumerate_pipelines(table, recompute=cfg.recompute_ci)
    if cfg.pipelines is None:
        return every
    by_name = {r.name: r for r in every}
    chosen = []
    for name in cfg.pipelines:
        key = name.strip().upper()
        if key not in by_name:
            raise ConfigError(f"unknown pipeline {name!r}; valid names: {sorted(by_name)}")
        chosen.append(by_name[key])
    return chosen


def validate_config(cfg: RunConfig) -> tuple[list[str], list[str]]:
    """Collect (errors, warnings) without side effects."""
    errors: list[str] = []
    warnings: list[str] = []
    if not cfg.datasets:
        errors.append("config lists no datasets")
    for entry in cfg.datasets:
        if not Path(entry.path).exists():
            errors.append(f"dataset file not found: {entry.path}")
        if entry.scores and not Path(entry.scores).exists():
            errors.append(f"score file not found: {entry.scores}")
    if not 0.0 < cfg.test_fraction < 1.0:
        errors.append(f"test_fraction must be in (0, 1), got {cfg.test_fraction}")
    if cfg.per_class is not None and cfg.per_class < 1:
        errors.append(f"per_class must be >= 1, got {cfg.per_class}")
    if cfg.jobs < 1:
        errors.append(f"jobs must be >= 1, got {cfg.jobs}")
    if cfg.correlation_scope not in ("test", "full", "both"):
        errors.append(f"correlation_scope must be test/full/both, got {cfg.correlation_scope!r}")
    if cfg.table_path and not Path(cfg.table_path).exists():
        errors.append(f"interpretability table not found: {cfg.table_path}")
    if cfg.min_df < 1:
        errors.append(f"min_df must be >= 1, got {cfg.min_df}")

    table = None
    try:
        table = ciscore.load_table(cfg.table_path)
    except (OSError, ConfigError, KeyError, json.JSONDecodeError) as exc:
        if not any("table" in e for e in errors):
            errors.append(f"cannot load interpretability table: {exc}")
    if table is not None:
        try:
            chosen = selected_pipelines(cfg, table)
        except ConfigError as exc:
            errors.append(str(exc))
        else:
            needs_scores = [r.name for r in chosen if r.pipeline.needs_external_scores]
            if needs_scores:
                for entry in cfg.datasets:
                    if not entry.scores:
                        errors.append(
                            f"dataset {entry.name!r} has no score file but pipelines "
                            f"{needs_scores} need external sentiment scores"
                        )
            else:
                for entry in cfg.datasets:
                    if entry.scores:
                        warnings.append(
                            f"dataset {entry.name!r} provides scores no selected pipeline uses"
                        )
    try:
        for family, over in (cfg.hyperparameters or {}).items():
            ModelSpec(family=str(family), hyperparameters=dict(over), seed=cfg.seed).resolved()
    except ConfigError as exc:
        errors.append(str(exc))
    bad_w2v = set(cfg.word2vec or {}) - set(W2VConfig.__dataclass_fields__)
    if bad_w2v:
        errors.append(f"unknown word2vec options {sorted(bad_w2v)}")
    return errors, warnings


def _digest(payload) -> str:
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True, ensure_ascii=False, default=str).encode("utf-8")
    ).hexdigest()


def _dataset_digest(ds: Dataset) -> str:
    return _digest([[r.id, r.rating, r.text, r.text_clean] for r in ds.reviews])


@dataclass
class _Prepared:
    """Per-dataset artifacts shared read-only by all grid cells."""

    entry: DatasetEntry
    dataset: Dataset
    digest: str
    train_idx: np.ndarray
    test_idx: np.ndarray
    ratings: np.ndarray
    features: dict[str, np.ndarray]
    vader_stars_real: np.ndarray
    external: ExternalScoreFile | None
    external_stars: np.ndarray | None


class Runner:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        errors, self.warnings = validate_config(cfg)
        if errors:
            raise ConfigError("invalid run config:\n- " + "\n- ".join(errors))
        self.table = ciscore.load_table(cfg.table_path)
        self.results = selected_pipelines(cfg, self.table)
        self.stopwords = load_stopwords(cfg.stopwords_path)
        self.lexicon = load_lexicon(cfg.lexicon_path)
        self.out_dir = Path(cfg.out_dir)
        cache_root = cfg.cache_dir or os.environ.get(CACHE_ENV) or str(self.out_dir / "cache")
        self.cache_dir = Path(cache_root)
        self.w2v_config = W2VConfig(**{"seed": cfg.seed, **cfg.word2vec})
        self.timings: list[dict] = []

    # -- preparation ---------------------------------------------------

    def _prepare_dataset(self, entry: DatasetEntry) -> _Prepared:
        ds = load_reviews(entry.path, name=entry.name)
        if any(not r.text_clean for r in ds.reviews):
            ds = clean_dataset(ds, self.stopwords)
        if self.cfg.per_class is not None:
            ds = balanced_sample(ds, self.cfg.per_class, self.cfg.seed)
        split = stratified_split(ds, self.cfg.test_fraction, self.cfg.seed)
        ids = ds.ids()
        train_idx = np.array([i for i, rid in enumerate(ids) if rid in split.train_ids])
        test_idx = np.array([i for i, rid in enumerate(ids) if rid in split.test_ids])
        ratings = np.array([r.rating for r in ds.reviews], dtype=np.int64)
        digest = _dataset_digest(ds)

        features = self._build_features(ds, digest, train_idx)
        vader = score_dataset(ds, self.lexicon)
        vader_stars = np.array([s.stars_real for s in vader])

        external = external_stars = None
        if entry.scores:
            external = load_external_scores(entry.scores, model_tag=ciscore.SENTIMENT_SOURCE)
            joined = join_scores(ds, external)
            external_stars = np.array([s.stars_real for s in joined])
        return _Prepared(
            entry=entry,
            dataset=ds,
            digest=digest,
            train_idx=train_idx,
            test_idx=test_idx,
            ratings=ratings,
            features=features,
            vader_stars_real=vader_stars,
            external=external,
            external_stars=external_stars,
        )

    def _needed_embeddings(self) -> set[str]:
        return {r.pipeline.embedding for r in self.results if r.pipeline.embedding}

    def _build_features(self, ds: Dataset, digest: str, train_idx: np.ndarray) -> dict[str, np.ndarray]:
        docs = [r.text_clean for r in ds.reviews]
        train_docs = [docs[i] for i in train_idx]
        needed = self._needed_embeddings()
        out: dict[str, np.ndarray] = {}
        if needed & {"COUNT", "TFIDF"}:
            vocab = fit_vocabulary(train_docs, min_df=self.cfg.min_df, max_features=self.cfg.max_features)
            if "COUNT" in needed:
                out["COUNT"] = count_transform(docs, vocab, ds.ids()).values
            if "TFIDF" in needed:
                out["TFIDF"] = tfidf_transform(docs, vocab, ds.ids()).values
        if "W2V" in needed:
            wv = self._word_vectors(train_docs, digest)
            out["W2V"] = np.vstack([doc_embed(d, wv) for d in docs])
        return out

    def _word_vectors(self, train_docs: list[str], digest: str) -> WordVectors:
        key = _digest(["w2v", digest, self.w2v_config.__dict__, __version__])
        path = self.cache_dir / "w2v" / f"{key}.txt"
        if path.exists():
            return load_word_vectors(path, self.w2v_config)
        wv = train_word2vec(train_docs, self.w2v_config)
        save_word_vectors(wv, path)
        return wv

    # -- cells ----------------------------------------------------------

    def _model_spec(self, head: str) -> ModelSpec:
        overrides = dict((self.cfg.hyperparameters or {}).get(head, {}))
        if head == "NN" and "hidden" in overrides:
            overrides["hidden"] = tuple(overrides["hidden"])
        return ModelSpec(family=head, hyperparameters=overrides, seed=self.cfg.seed)

    def _cell_cache_key(self, prep: _Prepared, result: ciscore.CiResult) -> str:
        spec = result.pipeline
        payload = [
            "cell",
            __version__,
            prep.digest,
            self.cfg.per_class,
            self.cfg.seed,
            self.cfg.test_fraction,
            spec.name,
            self.cfg.min_df,
            self.cfg.max_features,
            self.w2v_config.__dict__ if spec.embedding == "W2V" else None,
            self._model_spec(spec.head).resolved() if spec.head in ciscore.LEARNED_HEADS else None,
            bool(prep.external) and spec.needs_external_scores,
        ]
        return _digest(payload)

    def _cell_matrix(self, prep: _Prepared, spec: ciscore.PipelineSpec) -> np.ndarray:
        base = prep.features[spec.embedding]
        if spec.sentiment_feature is None:
            return base
        return np.hstack([base, prep.external_stars[:, np.newaxis]])

    def _run_cell(self, prep: _Prepared, result: ciscore.CiResult) -> dict:
        spec = result.pipeline
        started = time.perf_counter()
        cache_key = self._cell_cache_key(prep, result)
        cache_hit = False
        truth = prep.ratings[prep.test_idx]

        if spec.head == "VADER":
            pred = np.array([star_class(v) for v in prep.vader_stars_real[prep.test_idx]])
        elif spec.head == "BERT":
            pred = prep.external_stars[prep.test_idx].astype(np.int64)
        else:
            matrix = self._cell_matrix(prep, spec)
            model_spec = self._model_spec(spec.head)
            if spec.head == "NB" and "scale_features" not in model_spec.hyperparameters:
                # real-valued embeddings need min-max scaling before counting
                scale = spec.embedding in ("TFIDF", "W2V")
                model_spec = ModelSpec(
                    family="NB",
                    hyperparameters={**model_spec.hyperparameters, "scale_features": scale},
                    seed=model_spec.seed,
                )
            model_path = self.cache_dir / "models" / f"{cache_key}.json"
            if model_path.exists():
                model = load_model(model_path)
                cache_hit = True
            else:
                model = train(model_spec, matrix[prep.train_idx], prep.ratings[prep.train_idx])
                save_model(model, model_path)
            pred = model.predict(matrix[prep.test_idx])

        acc = evalreport.accuracy(pred, truth)
        cm = evalreport.confusion(pred, truth)
        elapsed = time.perf_counter() - started
        return {
            "dataset": prep.entry.name,
            "pipeline": spec.name,
            "ci": result.ci,
            "accuracy": acc,
            "n_test": int(len(truth)),
            "confusion": cm.matrix.tolist(),
            "cache_key": cache_key,
            "_seconds": elapsed,
            "_cache_hit": cache_hit,
        }

    # -- dataset-level statistics ----------------------------------------

    def _sentiment_stats(self, prep: _Prepared) -> tuple[dict, dict]:
        correlations: dict[str, float] = {}
        boxes: dict[str, dict] = {}
        scopes = ("test", "full") if self.cfg.correlation_scope == "both" else (self.cfg.correlation_scope,)
        sources: list[tuple[str, np.ndarray]] = [("VADER", prep.vader_stars_real)]
        if prep.external_stars is not None:
            sources.append((ciscore.SENTIMENT_SOURCE, prep.external_stars))
        for source, values in sources:
            for scope in scopes:
                idx = prep.test_idx if scope == "test" else np.arange(len(prep.ratings))
                try:
                    r = evalreport.pearson(values[idx], prep.ratings[idx])
                except DataError:
                    continue  # constant scores carry no correlation signal
                correlations[f"{source}/{scope}"] = r
            by_star = {
                star: [float(v) for v, t in zip(values, prep.ratings) if t == star]
                for star in evalreport.STARS
                if np.any(prep.ratings == star)
            }
            boxes[source] = {
                str(star): stats.__dict__
                for star, stats in evalreport.box_stats_by_star(by_star).items()
            }
        return correlations, boxes

    # -- top level --------------------------------------------------------

    def run(self) -> dict:
        started = time.perf_counter()
        prepared = [self._prepare_dataset(entry) for entry in self.cfg.datasets]
        cells: list[dict] = []
        tasks = [(prep, result) for prep in prepared for result in self.results]
        if self.cfg.jobs > 1:
            with ThreadPoolExecutor(max_workers=self.cfg.jobs) as pool:
                cells = list(pool.map(lambda task: self._run_cell(*task), tasks))
        else:
            cells = [self._run_cell(*task) for task in tasks]

        cells.sort(key=lambda c: (c["dataset"], c["pipeline"]))
        self.timings = [
            {
                "dataset": c["dataset"],
                "pipeline": c["pipeline"],
                "seconds": round(c.pop("_seconds"), 6),
                "cache_hit": c.pop("_cache_hit"),
            }
            for c in cells
        ]

        correlations: dict[str, dict] = {}
        boxes: dict[str, dict] = {}
        for prep in prepared:
            corr, box = self._sentiment_stats(prep)
            correlations[prep.entry.name] = corr
            boxes[prep.entry.name] = box

        manifest = {
            "version": __version__,
            "config_digest": _digest(self._config_payload()),
            "seed": self.cfg.seed,
            "test_fraction": self.cfg.test_fraction,
            "per_class": self.cfg.per_class,
            "recompute_ci": self.cfg.recompute_ci,
            "datasets": {
                prep.entry.name: {
                    "digest": prep.digest,
                    "n_reviews": len(prep.dataset),
                    "n_train": int(len(prep.train_idx)),
                    "n_test": int(len(prep.test_idx)),
                }
                for prep in prepared
            },
            "pipelines": [r.name for r in self.results],
            "cells": cells,
            "correlations": correlations,
            "box_stats": boxes,
        }

        self.out_dir.mkdir(parents=True, exist_ok=True)
        manifest_path = self.out_dir / "manifest.json"
        manifest_path.write_text(json.dumps(manifest, sort_keys=True, indent=1) + "\n", "utf-8")
        execution = {
            "total_seconds": round(time.perf_counter() - started, 6),
            "jobs": self.cfg.jobs,
            "cells": self.timings,
            "warnings": self.warnings,
        }
        (self.out_dir / "execution.json").write_text(
            json.dumps(execution, sort_keys=True, indent=1) + "\n", "utf-8"
        )
        emit_from_manifest(manifest, self.out_dir / "report")
        return manifest

    def _config_payload(self) -> dict:
        payload = {
            "datasets": [[d.name, d.path, d.scores] for d in self.cfg.datasets],
            **{
                k: getattr(self.cfg, k)
                for k in (
                    "per_class",
                    "seed",
                    "test_fraction",
                    "pipelines",
                    "recompute_ci",
                    "correlation_scope",
                    "min_df",
                    "max_features",
                    "word2vec",
                    "hyperparameters",
                )
            },
        }
        return payload


def emit_from_manifest(manifest: Mapping, report_dir: str | Path) -> list[Path]:
    """Render the CSV/SVG report bundle from a manifest record."""
    rows = [
        evalreport.TradeoffRow(
            dataset=c["dataset"], pipeline=c["pipeline"], ci=c["ci"], accuracy=c["accuracy"]
        )
        for c in manifest["cells"]
    ]
    confusions = {
        (c["dataset"], c["pipeline"]): evalreport.ConfusionMatrix(
            np.array(c["confusion"], dtype=np.int64)
        )
        for c in manifest["cells"]
    }
    box_groups = {}
    for dataset, by_source in manifest.get("box_stats", {}).items():
        for source, by_star in by_source.items():
            box_groups[(dataset, source)] = {
                int(star): evalreport.BoxStats(
                    low_whisker=s["low_whisker"],
                    q1=s["q1"],
                    median=s["median"],
                    q3=s["q3"],
                    high_whisker=s["high_whisker"],
                    outliers=tuple(s["outliers"]),
                )
                for star, s in by_star.items()
            }
    correlations = {}
    for dataset, by_key in manifest.get("correlations", {}).items():
        for key, r in by_key.items():
            source, _, scope = key.partition("/")
            correlations[(dataset, source, scope)] = r
    return evalreport.emit_report(
        rows,
        report_dir,
        confusions=confusions,
        box_groups=box_groups,
        correlations=correlations,
    )


def run_experiment(cfg: RunConfig) -> dict:
    """Validate, execute the grid, and write manifest + report files."""
    return Runner(cfg).run()
