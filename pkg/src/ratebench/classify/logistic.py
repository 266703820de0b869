"""Multinomial logistic regression trained by full-batch gradient descent.

Minimizes mean cross-entropy plus an L2 penalty (lambda/2)*||W||^2 on the
weights (bias unpenalized). Steps use Armijo backtracking so the loss is
non-increasing; training stops when the gradient norm drops below ``tol``
or after ``max_iters`` iterations.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError

DEFAULTS = {
    "l2": 1e-4,
    "tol": 1e-6,
    "max_iters": 5000,
    "step_size": 1.0,
}

ARMIJO_C = 1e-4
BACKTRACK = 0.5
STEP_GROWTH = 1.2
MIN_STEP = 1e-16

_LOG_GUARD = 1e-300  # guards log(0) when a class probability underflows


def softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def loss_only(w: np.ndarray, b: np.ndarray, x: np.ndarray, y_onehot: np.ndarray, l2: float) -> float:
    n = x.shape[0]
    probs = softmax(x @ w + b)
    ce = -float(np.sum(y_onehot * np.log(probs + _LOG_GUARD))) / n
    return ce + 0.5 * l2 * float(np.sum(w * w))


def loss_and_grad(
    w: np.ndarray,
    b: np.ndarray,
    x: np.ndarray,
    y_onehot: np.ndarray,
    l2: float,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Mean cross-entropy + (l2/2)||W||^2 and its analytic gradient."""
    n = x.shape[0]
    probs = softmax(x @ w + b)
    ce = -float(np.sum(y_onehot * np.log(probs + _LOG_GUARD))) / n
    loss = ce + 0.5 * l2 * float(np.sum(w * w))
    delta = (probs - y_onehot) / n
    grad_w = x.T @ delta + l2 * w
    grad_b = delta.sum(axis=0)
    return loss, grad_w, grad_b


def fit(
    x: np.ndarray,
    y_onehot: np.ndarray,
    l2: float = DEFAULTS["l2"],
    tol: float = DEFAULTS["tol"],
    max_iters: int = DEFAULTS["max_iters"],
    step_size: float = DEFAULTS["step_size"],
) -> tuple[np.ndarray, np.ndarray, list[float]]:
    """Gradient descent from zero weights; returns (W, b, loss history)."""
    if l2 <= 0 or tol <= 0 or max_iters < 1 or step_size <= 0:
        raise ConfigError("logistic regression hyperparameters must be positive")
    d, k = x.shape[1], y_onehot.shape[1]
    w = np.zeros((d, k))
    b = np.zeros(k)
    step = step_size
    loss, grad_w, grad_b = loss_and_grad(w, b, x, y_onehot, l2)
    history = [loss]
    for _ in range(max_iters):
        grad_sq = float(np.sum(grad_w * grad_w) + np.sum(grad_b * grad_b))
        if np.sqrt(grad_sq) < tol:
            break
        accepted = False
        while step >= MIN_STEP:
            w_next = w - step * grad_w
            b_next = b - step * grad_b
            loss_next = loss_only(w_next, b_next, x, y_onehot, l2)
            if loss_next <= loss - ARMIJO_C * step * grad_sq:
                accepted = True
                break
            step *= BACKTRACK
        if not accepted:
            break
        w, b = w_next, b_next
        loss, grad_w, grad_b = loss_and_grad(w, b, x, y_onehot, l2)
        history.append(loss)
        step = min(step * STEP_GROWTH, 1e6)
    return w, b, history
