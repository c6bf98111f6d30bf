"""Ligand-based target prediction with Bernoulli naive Bayes."""

from chemserve.predict.dataset import build_training_set
from chemserve.predict.model import (
    MAGIC,
    NBModel,
    Prediction,
    load_model,
    predict,
    save_model,
    score_bits,
    train,
)

__all__ = [
    "MAGIC",
    "NBModel",
    "Prediction",
    "build_training_set",
    "load_model",
    "predict",
    "save_model",
    "score_bits",
    "train",
]
