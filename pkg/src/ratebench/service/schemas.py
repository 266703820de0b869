"""Pydantic request/response models for the workbench HTTP API."""

from __future__ import annotations

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str
    version: str


class ErrorBody(BaseModel):
    kind: str  # validation | runtime
    message: str


class IngestRequest(BaseModel):
    input_path: str
    out_dir: str
    per_class: int | None = None
    seed: int = 42
    name: str | None = None
    stopwords_path: str | None = None


class IngestResponse(BaseModel):
    dataset_path: str
    n_reviews: int
    skipped_records: int
    class_counts: dict[int, int]


class SplitRequest(BaseModel):
    dataset_path: str
    out_path: str
    test_fraction: float = 0.3
    seed: int = 42


class SplitResponse(BaseModel):
    split_path: str
    n_train: int
    n_test: int


class EmbedRequest(BaseModel):
    dataset_path: str
    method: str  # count | tfidf | word2vec
    out_path: str
    split_path: str | None = None  # when given, fit on the train rows only
    min_df: int = 2
    max_features: int | None = None
    word2vec: dict = Field(default_factory=dict)
    vectors_out: str | None = None  # word2vec only: also dump the term vectors


class EmbedResponse(BaseModel):
    matrix_path: str
    n_docs: int
    n_features: int
    vectors_path: str | None = None


class SentimentRequest(BaseModel):
    dataset_path: str
    out_path: str
    engine: str = "vader"  # vader | external
    scores_path: str | None = None
    lexicon_path: str | None = None


class SentimentResponse(BaseModel):
    scores_path: str
    n_scored: int
    engine: str


class TrainRequest(BaseModel):
    matrix_path: str
    dataset_path: str
    split_path: str
    family: str  # LR | NB | SVM | NN
    out_path: str
    scores_path: str | None = None  # appends the external stars column
    hyperparameters: dict = Field(default_factory=dict)
    seed: int = 42


class TrainResponse(BaseModel):
    model_path: str
    family: str
    n_train: int
    parameter_count: int


class EvaluateRequest(BaseModel):
    matrix_path: str
    dataset_path: str
    split_path: str
    model_path: str
    scores_path: str | None = None
    confusion_out: str | None = None


class EvaluateResponse(BaseModel):
    accuracy: float
    n_test: int
    confusion: list[list[int]]
    confusion_path: str | None = None


class CiScoreRequest(BaseModel):
    pipeline: str | None = None  # e.g. "TFIDF+LR-BS"
    model: str | None = None  # single-model score, e.g. "VADER"
    table_path: str | None = None
    recompute: bool = False


class CiConstituent(BaseModel):
    name: str
    score: float


class CiScoreResponse(BaseModel):
    name: str
    ci: float
    constituents: list[CiConstituent]


class CiEnumerateRequest(BaseModel):
    table_path: str | None = None
    recompute: bool = False
    out_path: str | None = None


class CiEnumerateResponse(BaseModel):
    results: list[CiScoreResponse]
    out_path: str | None = None


class RunRequest(BaseModel):
    config_path: str | None = None
    config: dict | None = None  # inline alternative to config_path
    jobs: int | None = None
    out_dir: str | None = None
    seed: int | None = None


class CellSummary(BaseModel):
    dataset: str
    pipeline: str
    ci: float
    accuracy: float


class RunResponse(BaseModel):
    out_dir: str
    manifest_path: str
    n_cells: int
    cells: list[CellSummary]
    report_files: list[str]


class ValidateRequest(BaseModel):
    config_path: str | None = None
    config: dict | None = None


class ValidateResponse(BaseModel):
    ok: bool
    errors: list[str]
    warnings: list[str]


class ReportRequest(BaseModel):
    manifest_path: str
    out_dir: str | None = None


class ReportResponse(BaseModel):
    files: list[str]
