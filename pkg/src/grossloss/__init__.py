"""Gross metal loss estimation for rings from CAD-stage attributes.

Four regressors (least squares, CART tree, random forest, KNN) share one
pipeline: encode the ring attributes, split 80/20 with a seeded shuffle,
impute and standardize with train-fitted parameters, fit, and score by MAE
and RMSPE.
"""

from .errors import GrossLossError
from .evaluation import EvalReport, compare_models, mae, rmspe, train_model
from .persistence import load_model, save_model
from .regressors import (
    ForestConfig,
    KnnConfig,
    LinearConfig,
    TrainedModel,
    TreeConfig,
    fit_method,
    predict,
)
from .schema_io import Dataset, FeatureMatrix, RingRecord, encode_features, parse_csv, read_csv

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "EvalReport",
    "FeatureMatrix",
    "ForestConfig",
    "GrossLossError",
    "KnnConfig",
    "LinearConfig",
    "RingRecord",
    "TrainedModel",
    "TreeConfig",
    "compare_models",
    "encode_features",
    "fit_method",
    "load_model",
    "mae",
    "parse_csv",
    "predict",
    "read_csv",
    "rmspe",
    "save_model",
    "train_model",
]
