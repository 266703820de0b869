"""Interpretability scoring for single models and composite pipelines.

A model's interpretability score (IS) blends its mean expert rank per
criterion (simplicity, transparency, explainability), each normalized by
the per-criterion maximum, with its parameter count normalized by the
largest count in the table:

    IS = sum_c (R[m,c] / Rmax[c]) * w[c]  +  (P[m] / Pmax) * w_params

A composite pipeline's CI score is the plain sum of its constituents'
scores (embedding + optional sentiment source + classification head).
The bundled table ships canonical per-model scores alongside the raw
ranks; ``recompute=True`` re-derives scores from the formula instead,
which lands within a few hundredths of the canonical values.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from .errors import ConfigError, DataError

CRITERIA = ("simplicity", "transparency", "explainability")
EMBEDDINGS = ("COUNT", "TFIDF", "W2V")
LEARNED_HEADS = ("LR", "NB", "SVM", "NN")
STANDALONE_HEADS = ("VADER", "BERT")
SENTIMENT_SOURCE = "BERT"

WEIGHT_TOL = 1e-9


@dataclass(frozen=True)
class SurveyRow:
    expert_id: str
    model: str
    criterion: str
    rank: float


@dataclass(frozen=True)
class ExpertSurvey:
    rows: tuple[SurveyRow, ...]

    def models(self) -> list[str]:
        return sorted({r.model for r in self.rows})


@dataclass(frozen=True)
class InterpretabilityTable:
    """Mean expert ranks, parameter counts, weights, and canonical scores."""

    ranks: dict[str, dict[str, float]]  # model -> criterion -> mean rank
    params: dict[str, float]  # model -> parameter count
    weights: dict[str, float]  # criteria weights + "params"
    scores: dict[str, float]  # canonical per-model IS values
    embedding_scores: dict[str, float]

    def __post_init__(self):
        total = sum(self.weights.values())
        if abs(total - 1.0) > WEIGHT_TOL:
            raise ConfigError(f"interpretability weights must sum to 1, got {total!r}")
        if self.params and max(self.params.values()) <= 0:
            raise ConfigError("at least one model must have a positive parameter count")
        for model, by_criterion in self.ranks.items():
            missing = [c for c in CRITERIA if c not in by_criterion]
            if missing:
                raise ConfigError(f"model {model!r} missing criteria {missing}")

    def rank_max(self, criterion: str) -> float:
        return max(by_criterion[criterion] for by_criterion in self.ranks.values())

    def param_max(self) -> float:
        return max(self.params.values())


@dataclass(frozen=True)
class PipelineSpec:
    """One benchmark pipeline: optional embedding, optional sentiment column, head."""

    head: str
    embedding: str | None = None
    sentiment_feature: str | None = None  # sentiment source model, e.g. "BERT"

    def __post_init__(self):
        if self.head in STANDALONE_HEADS:
            if self.embedding is not None or self.sentiment_feature is not None:
                raise ConfigError(
                    f"{self.head} runs standalone: no embedding or sentiment feature allowed"
                )
        elif self.head in LEARNED_HEADS:
            if self.embedding is None:
                raise ConfigError(f"{self.head} needs an embedding ({', '.join(EMBEDDINGS)})")
            if self.embedding not in EMBEDDINGS:
                raise ConfigError(f"unknown embedding {self.embedding!r}")
        else:
            raise ConfigError(f"unknown pipeline head {self.head!r}")

    @property
    def name(self) -> str:
        if self.head in STANDALONE_HEADS:
            return self.head
        suffix = "-BS" if self.sentiment_feature else ""
        return f"{self.embedding}+{self.head}{suffix}"

    @property
    def needs_external_scores(self) -> bool:
        return self.head == "BERT" or self.sentiment_feature is not None


def parse_pipeline(name: str) -> PipelineSpec:
    """Parse names like "VADER", "TFIDF+LR", or "W2V+NN-BS"."""
    cleaned = name.strip().upper()
    if cleaned in STANDALONE_HEADS:
        return PipelineSpec(head=cleaned)
    if "+" not in cleaned:
        raise ConfigError(f"cannot parse pipeline name {name!r}")
    embedding, _, head = cleaned.partition("+")
    sentiment = None
    if head.endswith("-BS"):
        head = head[: -len("-BS")]
        sentiment = SENTIMENT_SOURCE
    return PipelineSpec(head=head, embedding=embedding, sentiment_feature=sentiment)


@dataclass(frozen=True)
class CiResult:
    pipeline: PipelineSpec
    ci: float
    constituents: tuple[tuple[str, float], ...]

    @property
    def name(self) -> str:
        return self.pipeline.name


def load_survey(path: str | Path) -> ExpertSurvey:
    """Read `expert_id,model,criterion,rank` CSV rows."""
    path = Path(path)
    rows: list[SurveyRow] = []
    seen: set[tuple[str, str, str]] = set()
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"expert_id", "model", "criterion", "rank"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise DataError(f"{path}: expected header with columns {sorted(required)}")
        for line_no, record in enumerate(reader, start=2):
            criterion = record["criterion"].strip().lower()
            if criterion not in CRITERIA:
                raise DataError(f"{path}:{line_no}: unknown criterion {criterion!r}")
            try:
                rank = float(record["rank"])
            except ValueError:
                raise DataError(f"{path}:{line_no}: bad rank {record['rank']!r}") from None
            if not 1.0 <= rank <= 5.0:
                raise DataError(f"{path}:{line_no}: rank {rank} outside [1, 5]")
            key = (record["expert_id"], record["model"], criterion)
            if key in seen:
                raise DataError(f"{path}:{line_no}: duplicate response {key}")
            seen.add(key)
            rows.append(SurveyRow(record["expert_id"], record["model"], criterion, rank))
    return ExpertSurvey(rows=tuple(rows))


def aggregate_rankings(survey: ExpertSurvey) -> dict[str, dict[str, float]]:
    """Arithmetic mean rank per (model, criterion); every cell must exist."""
    sums: dict[str, dict[str, list[float]]] = {}
    for row in survey.rows:
        sums.setdefault(row.model, {}).setdefault(row.criterion, []).append(row.rank)
    means: dict[str, dict[str, float]] = {}
    for model, by_criterion in sums.items():
        for criterion in CRITERIA:
            if criterion not in by_criterion:
                raise DataError(f"survey has no responses for ({model}, {criterion})")
        means[model] = {c: sum(v) / len(v) for c, v in by_criterion.items()}
    return means


def load_table(path: str | Path | None = None) -> InterpretabilityTable:
    """Load an interpretability table; without a path, the bundled default."""
    if path is None:
        text = resources.files("ratebench.data").joinpath("interpretability_table.json").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    payload = json.loads(text)
    return InterpretabilityTable(
        ranks={m: dict(v["ranks"]) for m, v in payload["models"].items()},
        params={m: float(v["params"]) for m, v in payload["models"].items()},
        weights=dict(payload["weights"]),
        scores={m: float(v["score"]) for m, v in payload["models"].items()},
        embedding_scores=dict(payload["embedding_scores"]),
    )


def interpretability_score(
    model_name: str,
    table: InterpretabilityTable,
    recompute: bool = False,
) -> float:
    """Canonical table score, or the formula value when ``recompute``."""
    if model_name not in table.ranks:
        raise ConfigError(f"model {model_name!r} not present in the interpretability table")
    if not recompute:
        return table.scores[model_name]
    p_max = table.param_max()
    if p_max <= 0:
        raise ConfigError("parameter normalization needs a positive maximum count")
    total = 0.0
    for criterion in CRITERIA:
        total += (table.ranks[model_name][criterion] / table.rank_max(criterion)) * table.weights[
            criterion
        ]
    total += (table.params[model_name] / p_max) * table.weights["params"]
    return total


def embedding_score(kind: str, table: InterpretabilityTable) -> float:
    key = kind.strip().upper()
    if key not in table.embedding_scores:
        raise ConfigError(f"unknown embedding kind {kind!r}")
    return table.embedding_scores[key]


def composite_ci(
    pipeline: PipelineSpec,
    table: InterpretabilityTable,
    recompute: bool = False,
) -> CiResult:
    """Sum the pipeline's constituent scores into one CI value."""
    constituents: list[tuple[str, float]] = []
    if pipeline.embedding is not None:
        constituents.append((pipeline.embedding, embedding_score(pipeline.embedding, table)))
    if pipeline.sentiment_feature is not None:
        constituents.append(
            (pipeline.sentiment_feature, interpretability_score(pipeline.sentiment_feature, table, recompute))
        )
    constituents.append((pipeline.head, interpretability_score(pipeline.head, table, recompute)))
    return CiResult(
        pipeline=pipeline,
        ci=sum(score for _, score in constituents),
        constituents=tuple(constituents),
    )


def enumerate_pipelines(
    table: InterpretabilityTable,
    recompute: bool = False,
) -> list[CiResult]:
    """All 26 benchmark pipelines, sorted by CI then name."""
    specs = [PipelineSpec(head=h) for h in STANDALONE_HEADS]
    for embedding in EMBEDDINGS:
        for head in LEARNED_HEADS:
            specs.append(PipelineSpec(head=head, embedding=embedding))
            specs.append(PipelineSpec(head=head, embedding=embedding, sentiment_feature=SENTIMENT_SOURCE))
    results = [composite_ci(spec, table, recompute) for spec in specs]
    results.sort(key=lambda r: (r.ci, r.name))
    return results


def save_ci_results(results: Iterable[CiResult], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pipeline", "ci", "constituents"])
        for r in results:
            parts = ";".join(f"{name}={score:.6f}" for name, score in r.constituents)
            writer.writerow([r.name, f"{r.ci:.6f}", parts])
