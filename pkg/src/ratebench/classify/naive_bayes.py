"""Multinomial naive Bayes with Laplace smoothing, closed form from counts.

Real-valued feature matrices (TF-IDF, averaged word vectors) can be
min-max scaled per feature into [0, 1] before counting; raw term counts
are used as-is. Joint log-likelihood accumulates feature by feature in
index order so scores are reproducible across BLAS builds and bit-equal
to a sequential counting oracle.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError, DataError

DEFAULTS = {
    "alpha": 1.0,
    "scale_features": False,
}


def minmax_fit(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-feature (min, range) with zero ranges left at 0."""
    mins = x.min(axis=0)
    ranges = x.max(axis=0) - mins
    return mins, ranges


def minmax_apply(x: np.ndarray, mins: np.ndarray, ranges: np.ndarray) -> np.ndarray:
    safe = np.where(ranges > 0.0, ranges, 1.0)
    scaled = (x - mins) / safe
    return np.clip(scaled, 0.0, 1.0)


def fit(
    x: np.ndarray,
    y: np.ndarray,
    labels: np.ndarray,
    alpha: float = DEFAULTS["alpha"],
) -> tuple[np.ndarray, np.ndarray]:
    """Return (class log priors, per-class feature log likelihoods)."""
    if alpha <= 0:
        raise ConfigError(f"naive Bayes smoothing alpha must be > 0, got {alpha}")
    if np.any(x < 0):
        raise DataError("multinomial naive Bayes requires non-negative features")
    n, v = x.shape
    k = len(labels)
    class_counts = np.array([np.sum(y == label) for label in labels], dtype=np.float64)
    log_prior = np.log(class_counts) - np.log(np.float64(n))
    feature_counts = np.zeros((k, v))
    for row, label in enumerate(labels):
        feature_counts[row] = x[y == label].sum(axis=0)
    smoothed = feature_counts + alpha
    totals = feature_counts.sum(axis=1) + alpha * v
    log_likelihood = np.log(smoothed) - np.log(totals)[:, np.newaxis]
    return log_prior, log_likelihood


def joint_log_likelihood(
    x: np.ndarray,
    log_prior: np.ndarray,
    log_likelihood: np.ndarray,
) -> np.ndarray:
    """Per-row class scores log P(c) + sum_j x_j * log P(t_j | c).

    The sum runs over features in ascending index order, one multiply and
    one add per feature, matching scalar sequential accumulation exactly.
    """
    n = x.shape[0]
    k = log_prior.shape[0]
    scores = np.tile(log_prior, (n, 1))
    for j in range(x.shape[1]):
        scores += x[:, j : j + 1] * log_likelihood[:, j]
    return scores


def parameter_count(v: int, k: int) -> int:
    return v * k + k
