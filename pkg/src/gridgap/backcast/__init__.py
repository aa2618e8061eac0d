"""Counterfactual daily-load estimation via an ensemble of small networks."""

from .ensemble import (
    ENSEMBLE_FORMAT,
    PREDICTION_LEVELS,
    BackcastEnsemble,
    BaseModel,
    MonthlySummary,
    Prediction,
    ReductionSeries,
    TrainingConfig,
    load_ensemble,
    monthly_summary,
    predict,
    predict_many,
    reduction_rate,
    reduction_series,
    save_ensemble,
    train_ensemble,
)
from .features import (
    DEFAULT_QUANTILE_LEVELS,
    DEFAULT_WEATHER_KINDS,
    MIN_WEATHER_CELLS,
    FeatureConfig,
    FeatureVector,
    build_features,
    feature_matrix,
    feature_names,
)
from .network import forward, gradient_check, init_params, loss_and_grads, train_network

__all__ = [
    "BackcastEnsemble",
    "BaseModel",
    "DEFAULT_QUANTILE_LEVELS",
    "DEFAULT_WEATHER_KINDS",
    "ENSEMBLE_FORMAT",
    "FeatureConfig",
    "FeatureVector",
    "MIN_WEATHER_CELLS",
    "MonthlySummary",
    "PREDICTION_LEVELS",
    "Prediction",
    "ReductionSeries",
    "TrainingConfig",
    "build_features",
    "feature_matrix",
    "feature_names",
    "forward",
    "gradient_check",
    "init_params",
    "load_ensemble",
    "loss_and_grads",
    "monthly_summary",
    "predict",
    "predict_many",
    "reduction_rate",
    "reduction_series",
    "save_ensemble",
    "train_ensemble",
]
