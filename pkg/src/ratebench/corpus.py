"""Review ingestion, text cleaning, balanced sampling, and train/test splitting.

Input corpora are JSONL files with one review per line carrying a
``reviewText`` string and an ``overall`` star rating (the layout of the
common Amazon review dumps). Every operation here is a pure function of
its inputs plus an explicit seed, so ingest artifacts are reproducible
byte for byte.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError, DataError

STAR_CLASSES = (1, 2, 3, 4, 5)


@dataclass(frozen=True)
class Review:
    """One review: stable id, raw text, integer star rating in 1..5.

    ``text_clean`` holds the preprocessed form used by embeddings; the raw
    ``text`` is kept because the rule-based sentiment engine needs
    capitalization and punctuation.
    """

    id: str
    text: str
    rating: int
    text_clean: str = ""


@dataclass(frozen=True)
class Dataset:
    name: str
    reviews: tuple[Review, ...]
    skipped_records: int = 0

    def __len__(self) -> int:
        return len(self.reviews)

    def ids(self) -> list[str]:
        return [r.id for r in self.reviews]

    def class_counts(self) -> dict[int, int]:
        return dict(Counter(r.rating for r in self.reviews))

    def subset(self, ids: Iterable[str], name_suffix: str = "") -> "Dataset":
        wanted = set(ids)
        kept = tuple(r for r in self.reviews if r.id in wanted)
        return Dataset(name=self.name + name_suffix, reviews=kept)


@dataclass(frozen=True)
class SplitIndex:
    """Disjoint train/test id sets produced by a seeded stratified split."""

    train_ids: frozenset[str]
    test_ids: frozenset[str]
    seed: int
    test_fraction: float = 0.3

    def to_json(self) -> str:
        payload = {
            "seed": self.seed,
            "test_fraction": self.test_fraction,
            "train_ids": sorted(self.train_ids),
            "test_ids": sorted(self.test_ids),
        }
        return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=0)

    @classmethod
    def from_json(cls, text: str) -> "SplitIndex":
        payload = json.loads(text)
        return cls(
            train_ids=frozenset(payload["train_ids"]),
            test_ids=frozenset(payload["test_ids"]),
            seed=int(payload["seed"]),
            test_fraction=float(payload.get("test_fraction", 0.3)),
        )


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Load the stopword list (one lowercase word per line, '#' comments)."""
    if path is None:
        text = resources.files("ratebench.data").joinpath("stopwords_en.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    words = [w.strip() for w in text.splitlines()]
    return frozenset(w for w in words if w and not w.startswith("#"))


def preprocess(text: str, stopwords: frozenset[str] | set[str]) -> str:
    """Lowercase, drop non-alphanumeric characters, remove stopword tokens.

    Punctuation is deleted (not blanked), so "don't" becomes "dont";
    remaining tokens are joined with single spaces. Idempotent.
    """
    lowered = text.lower()
    kept = "".join(ch if (ch.isalnum() or ch.isspace()) else "" for ch in lowered)
    tokens = [t for t in kept.split() if t not in stopwords]
    return " ".join(tokens)


def _coerce_rating(value) -> int | None:
    """Integer star in 1..5, accepting integral floats like 4.0; else None."""
    if isinstance(value, bool) or value is None:
        return None
    try:
        as_float = float(value)
    except (TypeError, ValueError):
        return None
    if not as_float.is_integer():
        return None
    star = int(as_float)
    return star if 1 <= star <= 5 else None


def load_reviews(
    path: str | Path,
    limit_per_class: int | None = None,
    name: str | None = None,
) -> Dataset:
    """Parse a JSONL review file into a Dataset.

    Records missing text or with a rating outside 1..5 are skipped and
    counted in ``Dataset.skipped_records``. When ``limit_per_class`` is
    given, parsing caps each star class at that many reviews.
    """
    path = Path(path)
    reviews: list[Review] = []
    taken: Counter[int] = Counter()
    skipped = 0
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError:
                skipped += 1
                continue
            text = record.get("reviewText", record.get("text"))
            rating = _coerce_rating(record.get("overall", record.get("rating")))
            if not isinstance(text, str) or rating is None:
                skipped += 1
                continue
            if limit_per_class is not None and taken[rating] >= limit_per_class:
                continue
            rid = record.get("id")
            if not isinstance(rid, str) or not rid or rid in seen_ids:
                asin = record.get("asin")
                rid = f"{asin}:{line_no}" if isinstance(asin, str) and asin else f"r{line_no}"
            seen_ids.add(rid)
            clean = record.get("text_clean", "")
            reviews.append(Review(id=rid, text=text, rating=rating, text_clean=clean))
            taken[rating] += 1
    if not reviews:
        raise DataError(f"{path}: no parseable review records")
    return Dataset(name=name or path.stem, reviews=tuple(reviews), skipped_records=skipped)


def clean_dataset(ds: Dataset, stopwords: frozenset[str] | set[str]) -> Dataset:
    """Return a copy with ``text_clean`` populated for every review."""
    cleaned = tuple(replace(r, text_clean=preprocess(r.text, stopwords)) for r in ds.reviews)
    return Dataset(name=ds.name, reviews=cleaned, skipped_records=ds.skipped_records)


def balanced_sample(ds: Dataset, per_class: int, seed: int) -> Dataset:
    """Draw exactly ``per_class`` reviews per star by seeded shuffle."""
    if per_class < 0:
        raise ConfigError(f"per_class must be >= 0, got {per_class}")
    by_star: dict[int, list[Review]] = {star: [] for star in STAR_CLASSES}
    for r in ds.reviews:
        by_star[r.rating].append(r)
    for star in STAR_CLASSES:
        n = len(by_star[star])
        if n < per_class:
            raise DataError(f"class {star}: {n} < {per_class}")
    rng = np.random.default_rng(seed)
    sampled: list[Review] = []
    for star in STAR_CLASSES:
        pool = by_star[star]
        order = rng.permutation(len(pool))
        sampled.extend(pool[i] for i in order[:per_class])
    return Dataset(name=ds.name, reviews=tuple(sampled))


def stratified_split(ds: Dataset, test_fraction: float, seed: int) -> SplitIndex:
    """Seeded per-class split; test size per class is round(fraction * n)."""
    if not 0.0 < test_fraction < 1.0:
        raise ConfigError(f"test_fraction must be in (0, 1), got {test_fraction}")
    rng = np.random.default_rng(seed)
    train: set[str] = set()
    test: set[str] = set()
    by_star: dict[int, list[str]] = {star: [] for star in STAR_CLASSES}
    for r in ds.reviews:
        by_star[r.rating].append(r.id)
    for star in STAR_CLASSES:
        ids = by_star[star]
        if not ids:
            continue
        order = rng.permutation(len(ids))
        n_test = int(np.floor(test_fraction * len(ids) + 0.5))
        for pos, idx in enumerate(order):
            (test if pos < n_test else train).add(ids[idx])
    return SplitIndex(
        train_ids=frozenset(train),
        test_ids=frozenset(test),
        seed=seed,
        test_fraction=test_fraction,
    )


def save_dataset(ds: Dataset, path: str | Path) -> None:
    """Write the canonical dataset file: one JSON review per line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for r in ds.reviews:
            record = {"id": r.id, "rating": r.rating, "text": r.text, "text_clean": r.text_clean}
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")


def load_dataset(path: str | Path, name: str | None = None) -> Dataset:
    """Read a canonical dataset file written by :func:`save_dataset`."""
    path = Path(path)
    reviews = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            try:
                reviews.append(
                    Review(
                        id=str(record["id"]),
                        text=record["text"],
                        rating=int(record["rating"]),
                        text_clean=record.get("text_clean", ""),
                    )
                )
            except KeyError as exc:
                raise DataError(f"{path}:{line_no}: missing field {exc}") from None
    if not reviews:
        raise DataError(f"{path}: empty dataset file")
    return Dataset(name=name or path.stem, reviews=tuple(reviews))


def save_split(split: SplitIndex, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(split.to_json() + "\n", encoding="utf-8")


def load_split(path: str | Path) -> SplitIndex:
    return SplitIndex.from_json(Path(path).read_text("utf-8"))


def labels_for(ds: Dataset, ids: Sequence[str]) -> np.ndarray:
    """Ratings aligned to ``ids``, as an int64 vector."""
    by_id = {r.id: r.rating for r in ds.reviews}
    missing = [i for i in ids if i not in by_id]
    if missing:
        raise DataError(f"ids not present in dataset: {missing[:10]}")
    return np.array([by_id[i] for i in ids], dtype=np.int64)
