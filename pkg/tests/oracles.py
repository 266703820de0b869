"""Independent reference implementations used to cross-check the trainers.

These deliberately avoid the production code paths: counting runs through
plain Python loops and dicts, and gradients come from central finite
differences. Logs are taken with np.log on arrays shaped like the
production tensors so that identical inputs give bit-identical outputs.
"""

import numpy as np


def nb_log_posteriors(x: np.ndarray, y, labels, alpha: float) -> np.ndarray:
    """Brute-force multinomial NB joint log-likelihoods, doc by doc."""
    n_docs, n_feats = x.shape
    labels = list(labels)
    class_count = {c: 0 for c in labels}
    for value in y:
        class_count[int(value)] += 1
    feature_count = {c: [0.0] * n_feats for c in labels}
    for i in range(n_docs):
        c = int(y[i])
        for j in range(n_feats):
            feature_count[c][j] = feature_count[c][j] + x[i][j]

    prior = np.log(np.array([class_count[c] for c in labels], dtype=np.float64)) - np.log(
        np.float64(n_docs)
    )
    smoothed = np.array([feature_count[c] for c in labels], dtype=np.float64) + alpha
    totals = np.array(
        [sum(feature_count[c]) for c in labels], dtype=np.float64
    ) + alpha * n_feats
    loglik = np.log(smoothed) - np.log(totals)[:, np.newaxis]

    scores = np.zeros((n_docs, len(labels)))
    for i in range(n_docs):
        for k in range(len(labels)):
            total = prior[k]
            for j in range(n_feats):
                total = total + x[i][j] * loglik[k][j]
            scores[i, k] = total
    return scores


def central_difference_gradient(f, x0: np.ndarray, h: float = 1e-5) -> np.ndarray:
    grad = np.zeros_like(x0)
    for i in range(len(x0)):
        bumped = x0.copy()
        bumped[i] = x0[i] + h
        up = f(bumped)
        bumped[i] = x0[i] - h
        down = f(bumped)
        grad[i] = (up - down) / (2.0 * h)
    return grad


def relative_error(a: np.ndarray, b: np.ndarray) -> float:
    denom = max(float(np.linalg.norm(a)), float(np.linalg.norm(b)), 1e-12)
    return float(np.linalg.norm(a - b)) / denom


def flatten_params(params):
    return np.concatenate([np.concatenate([w.ravel(), b.ravel()]) for w, b in params])


def unflatten_params(vector, shapes):
    params = []
    offset = 0
    for w_shape, b_shape in shapes:
        w_size = int(np.prod(w_shape))
        b_size = int(np.prod(b_shape))
        w = vector[offset : offset + w_size].reshape(w_shape)
        offset += w_size
        b = vector[offset : offset + b_size].reshape(b_shape)
        offset += b_size
        params.append((w, b))
    return params
