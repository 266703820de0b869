"""Uniform train/predict contract over the four classifier families.

``train`` dispatches a :class:`ModelSpec` to its family trainer and
returns an immutable :class:`FittedModel` exposing ``predict``,
``predict_proba`` and ``parameter_count``. Fitted models serialize to a
versioned JSON container: family tag, hyperparameters, labels, and every
parameter tensor as base64-encoded little-endian float64 bytes, so
round-trips are bit-exact.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ..embed import DocMatrix
from ..errors import ConfigError, DataError
from . import logistic, naive_bayes, neural, svm
from .features import CompositeFeatures

FAMILIES = ("LR", "NB", "SVM", "NN")

FORMAT_NAME = "ratebench-model"
FORMAT_VERSION = 1

_FAMILY_DEFAULTS: dict[str, dict] = {
    "LR": logistic.DEFAULTS,
    "NB": naive_bayes.DEFAULTS,
    "SVM": svm.DEFAULTS,
    "NN": neural.DEFAULTS,
}


@dataclass(frozen=True)
class ModelSpec:
    """Classifier family plus hyperparameter overrides and a seed."""

    family: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 42

    def resolved(self) -> dict:
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown classifier family {self.family!r}; pick one of {FAMILIES}")
        defaults = _FAMILY_DEFAULTS[self.family]
        unknown = set(self.hyperparameters) - set(defaults)
        if unknown:
            raise ConfigError(f"{self.family}: unknown hyperparameters {sorted(unknown)}")
        merged = {**defaults, **self.hyperparameters}
        if self.family == "NN":
            merged["hidden"] = tuple(merged["hidden"])
        return merged


def as_matrix(x) -> np.ndarray:
    if isinstance(x, CompositeFeatures):
        return x.matrix()
    if isinstance(x, DocMatrix):
        return x.values
    return np.asarray(x, dtype=np.float64)


def _encode(arr: np.ndarray) -> dict:
    data = np.ascontiguousarray(arr, dtype=np.float64)
    return {
        "shape": list(data.shape),
        "dtype": "float64",
        "data": base64.b64encode(data.astype("<f8").tobytes()).decode("ascii"),
    }


def _decode(payload: dict) -> np.ndarray:
    raw = base64.b64decode(payload["data"])
    arr = np.frombuffer(raw, dtype="<f8").astype(np.float64)
    return arr.reshape(payload["shape"])


class FittedModel:
    """Immutable trained classifier; construct via :func:`train` or loading."""

    def __init__(self, spec: ModelSpec, labels: np.ndarray, feature_dim: int):
        self.spec = spec
        self.family = spec.family
        self.labels = labels
        self.feature_dim = feature_dim

    def _check_input(self, x: np.ndarray) -> None:
        if x.ndim != 2 or x.shape[1] != self.feature_dim:
            raise DataError(
                f"{self.family}: expected {self.feature_dim} features, got shape {x.shape}"
            )

    def scores(self, x: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    def predict_proba(self, x) -> np.ndarray:
        x = as_matrix(x)
        self._check_input(x)
        s = self.scores(x)
        shifted = s - s.max(axis=1, keepdims=True)
        e = np.exp(shifted)
        return e / e.sum(axis=1, keepdims=True)

    def predict(self, x) -> np.ndarray:
        x = as_matrix(x)
        self._check_input(x)
        if x.shape[0] == 0:
            return np.array([], dtype=np.int64)
        # first-maximum argmax over ascending labels = lowest-label tie-break
        return self.labels[np.argmax(self.scores(x), axis=1)]

    def parameter_count(self) -> int:  # pragma: no cover - abstract
        raise NotImplementedError

    def _tensors(self) -> dict:  # pragma: no cover - abstract
        raise NotImplementedError

    def _extras(self) -> dict:
        return {}

    def to_payload(self) -> dict:
        return {
            "format": FORMAT_NAME,
            "format_version": FORMAT_VERSION,
            "family": self.family,
            "seed": self.spec.seed,
            "hyperparameters": _jsonable(self.spec.hyperparameters),
            "labels": [int(v) for v in self.labels],
            "feature_dim": int(self.feature_dim),
            "extras": self._extras(),
            "tensors": {name: _encode(arr) for name, arr in self._tensors().items()},
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


class LogisticModel(FittedModel):
    def __init__(self, spec, labels, w, b, loss_history=()):
        super().__init__(spec, labels, w.shape[0])
        self.w = w
        self.b = b
        self.loss_history = list(loss_history)

    def scores(self, x):
        return x @ self.w + self.b

    def parameter_count(self):
        d, k = self.w.shape
        return d * k + k

    def _tensors(self):
        return {"w": self.w, "b": self.b}


class NaiveBayesModel(FittedModel):
    def __init__(self, spec, labels, log_prior, log_likelihood, scale_min=None, scale_range=None):
        super().__init__(spec, labels, log_likelihood.shape[1])
        self.log_prior = log_prior
        self.log_likelihood = log_likelihood
        self.scale_min = scale_min
        self.scale_range = scale_range

    def _prepared(self, x):
        if self.scale_min is not None:
            return naive_bayes.minmax_apply(x, self.scale_min, self.scale_range)
        return x

    def joint_log_likelihood(self, x) -> np.ndarray:
        x = as_matrix(x)
        self._check_input(x)
        return naive_bayes.joint_log_likelihood(
            self._prepared(x), self.log_prior, self.log_likelihood
        )

    def scores(self, x):
        return naive_bayes.joint_log_likelihood(
            self._prepared(x), self.log_prior, self.log_likelihood
        )

    def parameter_count(self):
        k, v = self.log_likelihood.shape
        return naive_bayes.parameter_count(v, k)

    def _tensors(self):
        out = {"log_prior": self.log_prior, "log_likelihood": self.log_likelihood}
        if self.scale_min is not None:
            out["scale_min"] = self.scale_min
            out["scale_range"] = self.scale_range
        return out


class SVMModel(FittedModel):
    def __init__(self, spec, labels, binaries: Sequence[svm.BinarySVM], feature_dim: int):
        super().__init__(spec, labels, feature_dim)
        self.binaries = list(binaries)

    def scores(self, x):
        return np.column_stack([binary.decision(x) for binary in self.binaries])

    def parameter_count(self):
        per_class = sum(len(b.support_idx) * (self.feature_dim + 1) for b in self.binaries)
        return per_class + len(self.binaries)

    def _extras(self):
        return {
            "gamma": self.binaries[0].gamma,
            "c": self.binaries[0].c,
            "biases": [b.bias for b in self.binaries],
            "converged": [bool(b.converged) for b in self.binaries],
        }

    def _tensors(self):
        out = {}
        for i, binary in enumerate(self.binaries):
            out[f"sv_vectors_{i}"] = binary.support_vectors
            out[f"sv_coef_{i}"] = binary.support_coef
        return out


class NeuralModel(FittedModel):
    def __init__(self, spec, labels, params, loss_history=()):
        super().__init__(spec, labels, params[0][0].shape[0])
        self.params = [(w, b) for w, b in params]
        self.loss_history = list(loss_history)

    def scores(self, x):
        # forward returns probabilities; log keeps argmax and softmax stable
        return np.log(neural.forward(self.params, x) + 1e-300)

    def predict_proba(self, x):
        x = as_matrix(x)
        self._check_input(x)
        return neural.forward(self.params, x)

    def parameter_count(self):
        return sum(w.size + b.size for w, b in self.params)

    def _extras(self):
        return {"layer_sizes": [int(w.shape[1]) for w, _ in self.params]}

    def _tensors(self):
        out = {}
        for i, (w, b) in enumerate(self.params):
            out[f"w{i}"] = w
            out[f"b{i}"] = b
        return out


def _onehot(y: np.ndarray, labels: np.ndarray) -> np.ndarray:
    mapping = {int(label): i for i, label in enumerate(labels)}
    out = np.zeros((len(y), len(labels)))
    for row, value in enumerate(y):
        out[row, mapping[int(value)]] = 1.0
    return out


def train(spec: ModelSpec, x, y: Sequence[int] | np.ndarray) -> FittedModel:
    """Fit one classifier; raises on NaNs, label problems, or bad specs."""
    params = spec.resolved()
    matrix = as_matrix(x)
    y_arr = np.asarray(y, dtype=np.int64)
    if matrix.ndim != 2:
        raise DataError(f"feature matrix must be 2-D, got shape {matrix.shape}")
    if matrix.shape[0] != len(y_arr):
        raise DataError(f"{matrix.shape[0]} feature rows for {len(y_arr)} labels")
    if not np.all(np.isfinite(matrix)):
        raise DataError("feature matrix contains NaN or infinite entries")
    if len(y_arr) and (y_arr.min() < 1 or y_arr.max() > 5):
        raise DataError("labels must be integer stars in 1..5")
    labels = np.unique(y_arr)
    if len(labels) < 2:
        raise DataError(f"training needs >= 2 distinct classes, got {len(labels)}")

    if spec.family == "LR":
        w, b, history = logistic.fit(
            matrix,
            _onehot(y_arr, labels),
            l2=params["l2"],
            tol=params["tol"],
            max_iters=params["max_iters"],
            step_size=params["step_size"],
        )
        return LogisticModel(spec, labels, w, b, history)

    if spec.family == "NB":
        scale_min = scale_range = None
        prepared = matrix
        if params["scale_features"]:
            scale_min, scale_range = naive_bayes.minmax_fit(matrix)
            prepared = naive_bayes.minmax_apply(matrix, scale_min, scale_range)
        log_prior, log_likelihood = naive_bayes.fit(prepared, y_arr, labels, alpha=params["alpha"])
        return NaiveBayesModel(spec, labels, log_prior, log_likelihood, scale_min, scale_range)

    if spec.family == "SVM":
        gamma = svm.resolve_gamma(matrix, params["gamma"])
        kernel = svm.rbf_kernel(matrix, matrix, gamma)
        binaries = []
        for offset, label in enumerate(labels):
            signed = np.where(y_arr == label, 1.0, -1.0)
            binaries.append(
                svm.fit_binary(
                    matrix,
                    signed,
                    kernel,
                    gamma,
                    c=params["C"],
                    tol=params["tol"],
                    max_passes=params["max_passes"],
                    seed=spec.seed + offset,
                )
            )
        return SVMModel(spec, labels, binaries, matrix.shape[1])

    if spec.family == "NN":
        net_params, history = neural.fit(
            matrix,
            _onehot(y_arr, labels),
            seed=spec.seed,
            hidden=params["hidden"],
            epochs=params["epochs"],
            batch_size=params["batch_size"],
            learning_rate=params["learning_rate"],
            beta1=params["beta1"],
            beta2=params["beta2"],
            eps=params["eps"],
        )
        return NeuralModel(spec, labels, net_params, history)

    raise ConfigError(f"unknown classifier family {spec.family!r}")  # pragma: no cover


def save_model(model: FittedModel, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(model.to_payload(), sort_keys=True, indent=0) + "\n", "utf-8")


def load_model(path: str | Path) -> FittedModel:
    payload = json.loads(Path(path).read_text("utf-8"))
    if payload.get("format") != FORMAT_NAME:
        raise DataError(f"{path}: not a {FORMAT_NAME} file")
    if payload.get("format_version") != FORMAT_VERSION:
        raise DataError(f"{path}: unsupported format version {payload.get('format_version')}")
    hyper = payload["hyperparameters"]
    if payload["family"] == "NN" and "hidden" in hyper:
        hyper = {**hyper, "hidden": tuple(hyper["hidden"])}
    spec = ModelSpec(family=payload["family"], hyperparameters=hyper, seed=payload["seed"])
    labels = np.array(payload["labels"], dtype=np.int64)
    tensors = {name: _decode(enc) for name, enc in payload["tensors"].items()}
    extras = payload.get("extras", {})

    if spec.family == "LR":
        return LogisticModel(spec, labels, tensors["w"], tensors["b"])
    if spec.family == "NB":
        return NaiveBayesModel(
            spec,
            labels,
            tensors["log_prior"],
            tensors["log_likelihood"],
            tensors.get("scale_min"),
            tensors.get("scale_range"),
        )
    if spec.family == "SVM":
        binaries = []
        for i in range(len(labels)):
            vectors = tensors[f"sv_vectors_{i}"]
            coef = tensors[f"sv_coef_{i}"]
            binaries.append(
                svm.BinarySVM(
                    alphas=np.abs(coef),
                    bias=float(extras["biases"][i]),
                    support_idx=np.arange(len(coef)),
                    support_vectors=vectors,
                    support_coef=coef,
                    gamma=float(extras["gamma"]),
                    c=float(extras["c"]),
                    converged=bool(extras["converged"][i]),
                )
            )
        return SVMModel(spec, labels, binaries, int(payload["feature_dim"]))
    if spec.family == "NN":
        n_layers = len([k for k in tensors if k.startswith("w")])
        params = [(tensors[f"w{i}"], tensors[f"b{i}"]) for i in range(n_layers)]
        return NeuralModel(spec, labels, params)
    raise DataError(f"{path}: unknown family {spec.family!r}")
