"""Exact explanations for generalized additive models."""

from ._core import (
    GamxError,
    Model,
    check_sufficient,
    count_completions,
    is_redundant,
    load_model,
    minimal_contrastive,
    minimal_sufficient,
    oracle_cc,
    oracle_min_contrastive,
    oracle_min_sufficient,
    oracle_redundant,
    oracle_shap,
    oracle_sufficient,
    shap,
)

__all__ = [
    "GamxError",
    "Model",
    "check_sufficient",
    "count_completions",
    "is_redundant",
    "load_model",
    "minimal_contrastive",
    "minimal_sufficient",
    "oracle_cc",
    "oracle_min_contrastive",
    "oracle_min_sufficient",
    "oracle_redundant",
    "oracle_shap",
    "oracle_sufficient",
    "shap",
]
