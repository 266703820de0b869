"""Classifier families behind one train/predict/parameter-count contract."""

from .base import (
    FAMILIES,
    FittedModel,
    LogisticModel,
    ModelSpec,
    NaiveBayesModel,
    NeuralModel,
    SVMModel,
    load_model,
    save_model,
    train,
)
from .features import CompositeFeatures, assemble_features

__all__ = [
    "FAMILIES",
    "FittedModel",
    "LogisticModel",
    "ModelSpec",
    "NaiveBayesModel",
    "NeuralModel",
    "SVMModel",
    "CompositeFeatures",
    "assemble_features",
    "load_model",
    "save_model",
    "train",
]
