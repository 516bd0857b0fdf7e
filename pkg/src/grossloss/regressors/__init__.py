"""The four regressors behind one fit/predict contract.

Each method is described by a small frozen config object; :func:`fit_method`
turns a config plus standardized training data into a fitted model, and
:func:`predict` evaluates any fitted model (bare or wrapped in
:class:`TrainedModel`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..errors import WidthMismatchError
from ..preprocess import PreprocessParams
from ..schema_io import FeatureMatrix
from .forest import ForestConfig, ForestModel, forest_fit
from .knn import KnnModel, cv_scores, default_k_candidates, knn_fit, select_k
from .linear import LinearModel, linear_fit
from .tree import Leaf, Split, TreeConfig, TreeModel, TreeNode, predict_tree, tree_fit


@dataclass(frozen=True)
class LinearConfig:
    ridge_eps: float = 1e-8


@dataclass(frozen=True)
class KnnConfig:
    """``k=None`` selects K by cross-validation over ``k_candidates``.

    Defaults: candidates ``1..min(10, n_train - 1)`` and leave-one-out folds.
    """

    k: Optional[int] = None
    k_candidates: Optional[tuple] = None
    folds: Optional[int] = None


MethodConfig = Union[LinearConfig, TreeConfig, ForestConfig, KnnConfig]
FittedModel = Union[LinearModel, TreeModel, ForestModel, KnnModel]

# kind -> (report name, config type, model type); insertion order is the report order
METHODS = {
    "linear": ("Linear Regression", LinearConfig, LinearModel),
    "forest": ("Random Forest Regressor", ForestConfig, ForestModel),
    "tree": ("Decision Tree Regressor", TreeConfig, TreeModel),
    "knn": ("K-Nearest Neighbour Regressor", KnnConfig, KnnModel),
}


def kind_of(obj) -> str:
    for kind, (_, config_type, model_type) in METHODS.items():
        if isinstance(obj, (config_type, model_type)):
            return kind
    raise TypeError(f"not a known method config or model: {type(obj).__name__}")


def method_name(obj) -> str:
    return METHODS[kind_of(obj)][0]


def default_config(kind: str) -> MethodConfig:
    return METHODS[kind][1]()


def default_methods():
    return [default_config(kind) for kind in METHODS]


def fit_method(config: MethodConfig, X, y, seed: int = 0) -> FittedModel:
    """Fit one method on standardized, fully observed training data."""
    X = np.asarray(X.values if isinstance(X, FeatureMatrix) else X, dtype=float)
    y = np.asarray(y, dtype=float)
    if isinstance(config, LinearConfig):
        return linear_fit(X, y, config.ridge_eps)
    if isinstance(config, TreeConfig):
        return tree_fit(X, y, config)
    if isinstance(config, ForestConfig):
        return forest_fit(X, y, config, seed)
    if isinstance(config, KnnConfig):
        k = config.k
        if k is None:
            n = X.shape[0]
            folds = config.folds or n
            candidates = config.k_candidates or default_k_candidates(n)
            k = select_k(X, y, candidates, folds, seed)
        return knn_fit(X, y, k)
    raise TypeError(f"unknown method config {config!r}")


@dataclass(frozen=True)
class TrainedModel:
    """A fitted model bundled with the preprocessing it was trained behind."""

    model: FittedModel
    preprocess: PreprocessParams
    feature_names: tuple
    training_seed: int

    @property
    def kind(self):
        return kind_of(self.model)

    @property
    def method_name(self):
        return method_name(self.model)

    def predict_encoded(self, X: FeatureMatrix):
        """Impute, scale and predict an encoded (possibly incomplete) matrix."""
        if tuple(X.feature_names) != tuple(self.feature_names):
            raise WidthMismatchError(
                f"model expects features {list(self.feature_names)}, got {list(X.feature_names)}"
            )
        return predict(self, self.preprocess.apply(X))


def predict(model, X):
    """Predict standardized, fully observed rows with any fitted model."""
    values = X.values if isinstance(X, FeatureMatrix) else np.asarray(X, dtype=float)
    if isinstance(model, TrainedModel):
        if values.ndim != 2 or values.shape[1] != len(model.feature_names):
            raise WidthMismatchError(
                f"model expects {len(model.feature_names)} columns, got {values.shape}"
            )
        model = model.model
    if np.isnan(values).any():
        raise ValueError("predict requires imputed data (found missing cells)")
    return model.predict(values)


__all__ = [
    "ForestConfig",
    "ForestModel",
    "KnnConfig",
    "KnnModel",
    "Leaf",
    "LinearConfig",
    "LinearModel",
    "METHODS",
    "Split",
    "TrainedModel",
    "TreeConfig",
    "TreeModel",
    "TreeNode",
    "cv_scores",
    "default_config",
    "default_methods",
    "fit_method",
    "forest_fit",
    "kind_of",
    "knn_fit",
    "linear_fit",
    "method_name",
    "predict",
    "predict_tree",
    "select_k",
    "tree_fit",
]
