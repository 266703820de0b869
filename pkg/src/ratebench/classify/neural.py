"""Feed-forward network: ReLU hidden layers, softmax output, Adam updates.

Default architecture is input -> 512 -> 128 -> n_classes. Weights start
uniform in +-sqrt(6 / (fan_in + fan_out)), biases at zero, and both the
initialization and the per-epoch minibatch shuffles come from one seeded
generator, so a fixed seed reproduces the fitted parameters exactly.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError

DEFAULTS = {
    "hidden": (512, 128),
    "epochs": 20,
    "batch_size": 32,
    "learning_rate": 1e-4,
    "beta1": 0.9,
    "beta2": 0.999,
    "eps": 1e-8,
}

_LOG_GUARD = 1e-300


def init_params(
    d_in: int, hidden: tuple[int, ...], d_out: int, rng: np.random.Generator
) -> list[tuple[np.ndarray, np.ndarray]]:
    sizes = [d_in, *hidden, d_out]
    params = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        w = rng.uniform(-bound, bound, size=(fan_in, fan_out))
        params.append((w, np.zeros(fan_out)))
    return params


def forward(params: list[tuple[np.ndarray, np.ndarray]], x: np.ndarray) -> np.ndarray:
    """Class probabilities for each row of ``x``."""
    h = x
    for w, b in params[:-1]:
        h = np.maximum(h @ w + b, 0.0)
    w, b = params[-1]
    logits = h @ w + b
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def loss_and_grad(
    params: list[tuple[np.ndarray, np.ndarray]],
    x: np.ndarray,
    y_onehot: np.ndarray,
) -> tuple[float, list[tuple[np.ndarray, np.ndarray]]]:
    """Mean cross-entropy and its gradient via backpropagation."""
    n = x.shape[0]
    activations = [x]
    h = x
    for w, b in params[:-1]:
        h = np.maximum(h @ w + b, 0.0)
        activations.append(h)
    w_last, b_last = params[-1]
    logits = h @ w_last + b_last
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    probs = e / e.sum(axis=1, keepdims=True)
    loss = -float(np.sum(y_onehot * np.log(probs + _LOG_GUARD))) / n

    grads: list[tuple[np.ndarray, np.ndarray]] = [None] * len(params)  # type: ignore[list-item]
    delta = (probs - y_onehot) / n
    for layer in range(len(params) - 1, -1, -1):
        a_prev = activations[layer]
        grads[layer] = (a_prev.T @ delta, delta.sum(axis=0))
        if layer > 0:
            w, _ = params[layer]
            delta = (delta @ w.T) * (activations[layer] > 0.0)
    return loss, grads


def fit(
    x: np.ndarray,
    y_onehot: np.ndarray,
    seed: int,
    hidden: tuple[int, ...] = DEFAULTS["hidden"],
    epochs: int = DEFAULTS["epochs"],
    batch_size: int = DEFAULTS["batch_size"],
    learning_rate: float = DEFAULTS["learning_rate"],
    beta1: float = DEFAULTS["beta1"],
    beta2: float = DEFAULTS["beta2"],
    eps: float = DEFAULTS["eps"],
) -> tuple[list[tuple[np.ndarray, np.ndarray]], list[float]]:
    """Minibatch Adam training; returns (parameters, per-epoch mean loss)."""
    if any(size < 1 for size in hidden):
        raise ConfigError(f"hidden layer sizes must be >= 1, got {hidden}")
    if epochs < 1 or batch_size < 1 or learning_rate <= 0:
        raise ConfigError("neural network needs epochs >= 1, batch_size >= 1, lr > 0")
    rng = np.random.default_rng(seed)
    n, d_in = x.shape
    d_out = y_onehot.shape[1]
    params = init_params(d_in, tuple(hidden), d_out, rng)
    m_state = [(np.zeros_like(w), np.zeros_like(b)) for w, b in params]
    v_state = [(np.zeros_like(w), np.zeros_like(b)) for w, b in params]
    step = 0
    epoch_losses = []
    for _epoch in range(epochs):
        order = rng.permutation(n)
        batch_losses = []
        for start in range(0, n, batch_size):
            batch = order[start : start + batch_size]
            loss, grads = loss_and_grad(params, x[batch], y_onehot[batch])
            batch_losses.append(loss)
            step += 1
            bc1 = 1.0 - beta1**step
            bc2 = 1.0 - beta2**step
            for layer, (gw, gb) in enumerate(grads):
                w, b = params[layer]
                mw, mb = m_state[layer]
                vw, vb = v_state[layer]
                mw = beta1 * mw + (1.0 - beta1) * gw
                mb = beta1 * mb + (1.0 - beta1) * gb
                vw = beta2 * vw + (1.0 - beta2) * gw * gw
                vb = beta2 * vb + (1.0 - beta2) * gb * gb
                m_state[layer] = (mw, mb)
                v_state[layer] = (vw, vb)
                w = w - learning_rate * (mw / bc1) / (np.sqrt(vw / bc2) + eps)
                b = b - learning_rate * (mb / bc1) / (np.sqrt(vb / bc2) + eps)
                params[layer] = (w, b)
        epoch_losses.append(float(np.mean(batch_losses)))
    return params, epoch_losses


def parameter_count(d_in: int, hidden: tuple[int, ...], d_out: int) -> int:
    sizes = [d_in, *hidden, d_out]
    return sum(fan_in * fan_out + fan_out for fan_in, fan_out in zip(sizes[:-1], sizes[1:]))
