"""Dual-regularized closed-form shallow autoencoder (DUET) for sparse matrix completion."""

from ._core import (
    DuetError,
    Model,
    __version__,
    aupr,
    cross_validate,
    fit,
    jaccard_similarity,
    load_dataset,
    load_model,
    ndcg_at_k,
    precision_at_k,
    predict,
    save_model,
    stationarity_residual,
    welch_t_test,
)

__all__ = [
    "DuetError",
    "Model",
    "aupr",
    "cross_validate",
    "fit",
    "jaccard_similarity",
    "load_dataset",
    "load_model",
    "ndcg_at_k",
    "precision_at_k",
    "predict",
    "save_model",
    "stationarity_residual",
    "welch_t_test",
]
