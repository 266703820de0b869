"""Bag-of-words document embeddings: raw counts and smoothed TF-IDF.

Documents are the cleaned, whitespace-tokenized review texts. The
vocabulary fixes a lexicographic term order so every transform is
deterministic; TF-IDF uses the smoothed formula
``idf(t) = ln((1 + n_docs) / (1 + df(t))) + 1`` followed by L2 row
normalization (all-zero rows stay zero).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class Vocabulary:
    """Term index with document frequencies over the fitting corpus."""

    index: dict[str, int]
    document_frequency: np.ndarray  # int64, aligned to index values
    n_docs: int

    def __len__(self) -> int:
        return len(self.index)

    @property
    def terms(self) -> list[str]:
        ordered = [""] * len(self.index)
        for term, i in self.index.items():
            ordered[i] = term
        return ordered


@dataclass(frozen=True)
class DocMatrix:
    """Dense document-by-feature matrix with row-aligned review ids."""

    values: np.ndarray  # float64 (n_docs, n_features)
    row_ids: tuple[str, ...]

    @property
    def n_docs(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise DataError("document matrix contains non-finite entries")
        if len(self.row_ids) != self.values.shape[0]:
            raise DataError("row_ids length does not match matrix rows")


def tokenize(doc: str) -> list[str]:
    return doc.split()


def fit_vocabulary(
    docs: Sequence[str],
    min_df: int = 1,
    max_features: int | None = None,
) -> Vocabulary:
    """Build a lexicographically ordered vocabulary over whitespace tokens.

    Terms must appear in at least ``min_df`` documents; ``max_features``
    optionally keeps only the highest-document-frequency terms (ties broken
    alphabetically).
    """
    if len(docs) == 0:
        raise DataError("cannot fit a vocabulary on an empty corpus")
    df: dict[str, int] = {}
    for doc in docs:
        for term in set(tokenize(doc)):
            df[term] = df.get(term, 0) + 1
    kept = [t for t, c in df.items() if c >= min_df]
    if max_features is not None and len(kept) > max_features:
        kept.sort(key=lambda t: (-df[t], t))
        kept = kept[:max_features]
    kept.sort()
    index = {t: i for i, t in enumerate(kept)}
    freqs = np.array([df[t] for t in kept], dtype=np.int64)
    return Vocabulary(index=index, document_frequency=freqs, n_docs=len(docs))


def count_transform(
    docs: Sequence[str],
    vocab: Vocabulary,
    row_ids: Sequence[str] | None = None,
) -> DocMatrix:
    """Raw term-count matrix; out-of-vocabulary tokens are ignored."""
    values = np.zeros((len(docs), len(vocab)), dtype=np.float64)
    index = vocab.index
    for row, doc in enumerate(docs):
        for term in tokenize(doc):
            col = index.get(term)
            if col is not None:
                values[row, col] += 1.0
    ids = tuple(row_ids) if row_ids is not None else tuple(str(i) for i in range(len(docs)))
    return DocMatrix(values=values, row_ids=ids)


def idf_vector(vocab: Vocabulary) -> np.ndarray:
    """Smoothed inverse document frequency per vocabulary term."""
    df = vocab.document_frequency.astype(np.float64)
    return np.log((1.0 + vocab.n_docs) / (1.0 + df)) + 1.0


def tfidf_transform(
    docs: Sequence[str],
    vocab: Vocabulary,
    row_ids: Sequence[str] | None = None,
) -> DocMatrix:
    """TF-IDF matrix with L2-normalized rows (zero rows left untouched)."""
    counts = count_transform(docs, vocab, row_ids)
    weighted = counts.values * idf_vector(vocab)[np.newaxis, :]
    norms = np.linalg.norm(weighted, axis=1)
    nonzero = norms > 0.0
    weighted[nonzero] /= norms[nonzero, np.newaxis]
    return DocMatrix(values=weighted, row_ids=counts.row_ids)


def save_doc_matrix(matrix: DocMatrix, path: str | Path) -> None:
    """CSV export: id column first, then one column per feature index."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        header = ["id"] + [str(i) for i in range(matrix.n_features)]
        fh.write(",".join(header) + "\n")
        for rid, row in zip(matrix.row_ids, matrix.values):
            fh.write(rid + "," + ",".join(repr(v) for v in row.tolist()) + "\n")


def load_doc_matrix(path: str | Path) -> DocMatrix:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("id,"):
            raise DataError(f"{path}: not a document-matrix CSV (missing id column)")
        ids: list[str] = []
        rows: list[list[float]] = []
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            cells = line.split(",")
            ids.append(cells[0])
            rows.append([float(c) for c in cells[1:]])
    return DocMatrix(values=np.array(rows, dtype=np.float64), row_ids=tuple(ids))
