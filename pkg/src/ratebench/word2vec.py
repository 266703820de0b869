"""Skip-gram word vectors trained with negative sampling.

Training is deliberately single-threaded and driven by one seeded PRNG
stream (initialization first, then negative draws in document order), so
a fixed seed reproduces vectors bit for bit. The noise distribution is
the unigram distribution raised to 0.75.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .embed import tokenize
from .errors import DataError

LR_FLOOR_FACTOR = 1e-4  # learning rate never decays below lr * this


@dataclass(frozen=True)
class W2VConfig:
    dim: int = 100
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    min_count: int = 2
    seed: int = 42


@dataclass(frozen=True)
class WordVectors:
    """Input-side embedding per vocabulary term."""

    dimension: int
    index: dict[str, int]
    matrix: np.ndarray  # (V, dim) float64
    config: W2VConfig
    epoch_losses: tuple[float, ...] = field(default=())

    def __contains__(self, term: str) -> bool:
        return term in self.index

    def vector(self, term: str) -> np.ndarray | None:
        i = self.index.get(term)
        return None if i is None else self.matrix[i]

    @property
    def terms(self) -> list[str]:
        ordered = [""] * len(self.index)
        for term, i in self.index.items():
            ordered[i] = term
        return ordered


def _log_sigmoid(x: np.ndarray) -> np.ndarray:
    return -np.logaddexp(0.0, -x)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return np.exp(_log_sigmoid(x))


def train_word2vec(docs: Sequence[str], config: W2VConfig = W2VConfig()) -> WordVectors:
    """Train skip-gram vectors with negative sampling over tokenized docs.

    For every (center, context) pair within the window the objective
    log s(u_ctx . v_ctr) + sum_k log s(-u_neg_k . v_ctr) is ascended by
    SGD with a linearly decaying learning rate. Returns the input vectors
    together with the mean per-pair loss of each epoch.
    """
    token_docs = [tokenize(d) for d in docs]
    counts: dict[str, int] = {}
    for doc in token_docs:
        for tok in doc:
            counts[tok] = counts.get(tok, 0) + 1
    vocab_terms = sorted(
        (t for t, c in counts.items() if c >= config.min_count),
        key=lambda t: (-counts[t], t),
    )
    if not vocab_terms:
        raise DataError("word2vec: no term meets min_count; corpus too small")
    index = {t: i for i, t in enumerate(vocab_terms)}
    id_docs = [[index[t] for t in doc if t in index] for doc in token_docs]
    id_docs = [doc for doc in id_docs if len(doc) >= 2]
    total_tokens = sum(len(d) for d in id_docs)
    if total_tokens < config.window:
        raise DataError(
            f"word2vec: corpus has {total_tokens} usable tokens, need >= window ({config.window})"
        )

    freq = np.array([counts[t] for t in vocab_terms], dtype=np.float64)
    noise = freq**0.75
    noise_cdf = np.cumsum(noise / noise.sum())

    pairs_per_epoch = 0
    for doc in id_docs:
        n = len(doc)
        for i in range(n):
            pairs_per_epoch += min(n, i + config.window + 1) - max(0, i - config.window) - 1
    total_pairs = pairs_per_epoch * config.epochs

    rng = np.random.default_rng(config.seed)
    v_dim = config.dim
    w_in = (rng.random((len(vocab_terms), v_dim)) - 0.5) / v_dim
    w_out = np.zeros((len(vocab_terms), v_dim), dtype=np.float64)

    k = config.negatives
    lr0 = config.learning_rate
    processed = 0
    epoch_losses: list[float] = []
    for _epoch in range(config.epochs):
        loss_sum = 0.0
        for doc in id_docs:
            n = len(doc)
            for i, center in enumerate(doc):
                lo = max(0, i - config.window)
                hi = min(n, i + config.window + 1)
                ctx = [doc[j] for j in range(lo, hi) if j != i]
                m = len(ctx)
                if m == 0:
                    continue
                lr = max(lr0 * (1.0 - processed / total_pairs), lr0 * LR_FLOOR_FACTOR)
                negs = np.searchsorted(noise_cdf, rng.random(m * k))
                rows = np.concatenate([np.asarray(ctx, dtype=np.intp), negs])
                u = w_out[rows]
                v = w_in[center]
                scores = u @ v
                loss_sum += -float(np.sum(_log_sigmoid(scores[:m])))
                loss_sum += -float(np.sum(_log_sigmoid(-scores[m:])))
                labels = np.zeros(m * (k + 1))
                labels[:m] = 1.0
                g = lr * (labels - _sigmoid(scores))
                w_in[center] = v + g @ u
                np.add.at(w_out, rows, g[:, np.newaxis] * v[np.newaxis, :])
                processed += m
        epoch_losses.append(loss_sum / pairs_per_epoch)

    return WordVectors(
        dimension=v_dim,
        index=index,
        matrix=w_in,
        config=config,
        epoch_losses=tuple(epoch_losses),
    )


def doc_embed(doc: str, wv: WordVectors) -> np.ndarray:
    """Mean of the vectors of in-vocabulary tokens; zero vector if none."""
    rows = [wv.index[t] for t in tokenize(doc) if t in wv.index]
    if not rows:
        return np.zeros(wv.dimension, dtype=np.float64)
    return wv.matrix[rows].mean(axis=0)


def save_word_vectors(wv: WordVectors, path: str | Path) -> None:
    """Common text format: header "V dim", then one term + floats per line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(wv.index)} {wv.dimension}\n")
        for term in wv.terms:
            vec = wv.matrix[wv.index[term]]
            fh.write(term + " " + " ".join(repr(x) for x in vec.tolist()) + "\n")


def load_word_vectors(path: str | Path, config: W2VConfig | None = None) -> WordVectors:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise DataError(f"{path}: malformed word-vector header")
        n_terms, dim = int(header[0]), int(header[1])
        index: dict[str, int] = {}
        matrix = np.zeros((n_terms, dim), dtype=np.float64)
        for i, line in enumerate(fh):
            parts = line.rstrip("\n").split(" ")
            if len(parts) != dim + 1:
                raise DataError(f"{path}: line {i + 2} has {len(parts) - 1} values, expected {dim}")
            index[parts[0]] = i
            matrix[i] = [float(x) for x in parts[1:]]
    if len(index) != n_terms:
        raise DataError(f"{path}: header declares {n_terms} terms, found {len(index)}")
    return WordVectors(dimension=dim, index=index, matrix=matrix, config=config or W2VConfig())
