"""Batch sentiment scoring of reviews into the star-prediction CSV contract.

Two scorer backends share one interface:

* ``TransformersScorer`` runs a pretrained 5-way sentiment model (default:
  the multilingual uncased checkpoint fine-tuned on product reviews) and
  takes the argmax star of its head. Inputs longer than the model's
  maximum sequence length are truncated and counted.
* ``OfflineScorer`` (model ids ``offline`` or ``offline:<seed>``) is a
  frozen hashed bag-of-words head: deterministic pseudo-scores for
  air-gapped fixture generation and plumbing tests, not a real sentiment
  model.

The output CSV matches the workbench's external-score contract exactly:
header ``review_id,stars,confidence``, integer stars in 1..5, ids copied
verbatim, one row per input review.
"""

from __future__ import annotations

import csv
import json
import string
import sys
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

DEFAULT_MODEL = "nlptown/bert-base-multilingual-uncased-sentiment"
OFFLINE_PREFIX = "offline"
OFFLINE_BUCKETS = 512
OFFLINE_MAX_TOKENS = 256


class ExporterError(Exception):
    """Fatal export failure (unreadable input, model load failure)."""


@dataclass(frozen=True)
class ExportJob:
    input_path: str
    output_path: str
    model: str = DEFAULT_MODEL
    batch_size: int = 32
    device: str = "cpu"
    clean_text: bool = False  # default scores RAW text

    def __post_init__(self):
        if self.batch_size < 1:
            raise ExporterError(f"batch size must be >= 1, got {self.batch_size}")


def read_reviews(path: str | Path) -> list[tuple[str, str]]:
    """Parse (id, text) pairs from a JSONL review file.

    Accepts both raw dumps (``reviewText``) and the workbench's canonical
    datasets (``text``); ids fall back to ``asin``/line number.
    """
    path = Path(path)
    if not path.exists():
        raise ExporterError(f"input file not found: {path}")
    out: list[tuple[str, str]] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError:
                continue
            text = record.get("reviewText", record.get("text"))
            if not isinstance(text, str):
                continue
            rid = record.get("id")
            if not isinstance(rid, str) or not rid or rid in seen:
                asin = record.get("asin")
                rid = f"{asin}:{line_no}" if isinstance(asin, str) and asin else f"r{line_no}"
            seen.add(rid)
            out.append((rid, text))
    if not out:
        raise ExporterError(f"{path}: no parseable review records")
    return out


def strip_markup(text: str) -> str:
    """Light cleaning used behind --clean-text: lowercase, drop punctuation."""
    lowered = text.lower()
    kept = "".join(ch for ch in lowered if ch not in string.punctuation)
    return " ".join(kept.split())


class OfflineScorer:
    """Frozen random linear head over hashed token buckets."""

    def __init__(self, seed: int = 0):
        rng = np.random.default_rng(seed)
        self.weights = rng.normal(scale=1.0, size=(OFFLINE_BUCKETS, 5))
        self.bias = rng.normal(scale=0.1, size=5)
        self.truncated = 0

    def score_batch(self, texts: Sequence[str]) -> list[tuple[int, float]]:
        results = []
        for text in texts:
            tokens = text.lower().split()
            if len(tokens) > OFFLINE_MAX_TOKENS:
                tokens = tokens[:OFFLINE_MAX_TOKENS]
                self.truncated += 1
            counts = np.zeros(OFFLINE_BUCKETS)
            for token in tokens:
                counts[zlib.crc32(token.encode("utf-8")) % OFFLINE_BUCKETS] += 1.0
            if tokens:
                counts /= np.sqrt(len(tokens))
            logits = counts @ self.weights + self.bias
            shifted = np.exp(logits - logits.max())
            probs = shifted / shifted.sum()
            star = int(np.argmax(probs)) + 1
            results.append((star, float(probs.max())))
        return results


class TransformersScorer:
    """Pretrained 5-way sentiment head; argmax star with softmax confidence."""

    def __init__(self, model_name: str, device: str = "cpu"):
        try:
            import torch
            from transformers import AutoModelForSequenceClassification, AutoTokenizer
        except ImportError as exc:  # transformers/torch are an optional extra
            raise ExporterError(f"transformers backend unavailable: {exc}") from None
        try:
            self.tokenizer = AutoTokenizer.from_pretrained(model_name)
            self.model = AutoModelForSequenceClassification.from_pretrained(model_name)
        except Exception as exc:
            raise ExporterError(f"cannot load model {model_name!r}: {exc}") from None
        if getattr(self.model.config, "num_labels", 5) != 5:
            raise ExporterError(f"model {model_name!r} does not have a 5-way head")
        self._torch = torch
        self.device = device
        self.model.to(device)
        self.model.eval()
        self.max_length = int(min(self.tokenizer.model_max_length, 512))
        self.truncated = 0

    def score_batch(self, texts: Sequence[str]) -> list[tuple[int, float]]:
        torch = self._torch
        for text in texts:
            if len(self.tokenizer(text, truncation=False)["input_ids"]) > self.max_length:
                self.truncated += 1
        encoded = self.tokenizer(
            list(texts),
            truncation=True,
            max_length=self.max_length,
            padding=True,
            return_tensors="pt",
        ).to(self.device)
        with torch.no_grad():
            logits = self.model(**encoded).logits
        probs = torch.softmax(logits, dim=-1)
        stars = (torch.argmax(probs, dim=-1) + 1).tolist()
        confidences = probs.max(dim=-1).values.tolist()
        return [(int(s), float(c)) for s, c in zip(stars, confidences)]


def make_scorer(model: str, device: str = "cpu"):
    if model == OFFLINE_PREFIX or model.startswith(OFFLINE_PREFIX + ":"):
        _, _, seed = model.partition(":")
        return OfflineScorer(seed=int(seed) if seed else 0)
    return TransformersScorer(model, device=device)


def export_scores(job: ExportJob) -> dict:
    """Score every input review and write the score CSV; returns a summary."""
    reviews = read_reviews(job.input_path)
    scorer = make_scorer(job.model, device=job.device)
    out_path = Path(job.output_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    n_rows = 0
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["review_id", "stars", "confidence"])
        for start in range(0, len(reviews), job.batch_size):
            batch = reviews[start : start + job.batch_size]
            texts = [strip_markup(t) if job.clean_text else t for _, t in batch]
            for (rid, _), (star, confidence) in zip(batch, scorer.score_batch(texts)):
                if not 1 <= star <= 5:  # pragma: no cover - backend contract
                    raise ExporterError(f"backend produced star {star} outside 1..5")
                writer.writerow([rid, star, f"{confidence:.4f}"])
                n_rows += 1
    if scorer.truncated:
        print(f"truncated {scorer.truncated} over-length reviews", file=sys.stderr)
    return {
        "rows": n_rows,
        "truncated": scorer.truncated,
        "model": job.model,
        "output_path": str(out_path),
    }
