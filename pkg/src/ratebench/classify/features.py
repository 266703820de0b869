"""Composite feature assembly: embedding matrix plus optional sentiment column."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..embed import DocMatrix
from ..errors import DataError
from ..sentiment import SentimentScore


@dataclass(frozen=True)
class CompositeFeatures:
    """A document matrix, optionally widened by one sentiment-score column."""

    base: DocMatrix
    sentiment_column: np.ndarray | None = None  # (n_docs,) star values in [1, 5]

    def __post_init__(self):
        if self.sentiment_column is not None and len(self.sentiment_column) != self.base.n_docs:
            raise DataError(
                f"sentiment column has {len(self.sentiment_column)} entries "
                f"for {self.base.n_docs} rows"
            )

    @property
    def n_features(self) -> int:
        return self.base.n_features + (0 if self.sentiment_column is None else 1)

    @property
    def row_ids(self) -> tuple[str, ...]:
        return self.base.row_ids

    def matrix(self) -> np.ndarray:
        if self.sentiment_column is None:
            return self.base.values
        return np.hstack([self.base.values, self.sentiment_column[:, np.newaxis]])


def assemble_features(
    base: DocMatrix,
    scores: Sequence[SentimentScore] | None = None,
) -> CompositeFeatures:
    """Append per-review sentiment stars (raw 1..5) as one extra feature.

    ``scores`` must align with the matrix rows one-to-one, same ids in the
    same order; without scores the matrix passes through unchanged.
    """
    if scores is None:
        return CompositeFeatures(base=base)
    if len(scores) != base.n_docs:
        raise DataError(f"{len(scores)} sentiment scores for {base.n_docs} matrix rows")
    for row_id, score in zip(base.row_ids, scores):
        if score.review_id != row_id:
            raise DataError(
                f"sentiment scores misaligned: row {row_id!r} vs score {score.review_id!r}"
            )
    column = np.array([s.stars_real for s in scores], dtype=np.float64)
    return CompositeFeatures(base=base, sentiment_column=column)
