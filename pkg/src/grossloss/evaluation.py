"""Error metrics, the train/test pipeline and the four-way model comparison."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import regressors
from .errors import DataError, EmptyError, LengthMismatchError
from .preprocess import PreprocessParams, SplitIndices, fit_preprocess, split_indices
from .regressors import TrainedModel, fit_method, method_name, predict
from .schema_io import Dataset, FeatureMatrix, encode_features


def _pair(truth, pred):
    truth = np.asarray(truth, dtype=float).ravel()
    pred = np.asarray(pred, dtype=float).ravel()
    if truth.size != pred.size:
        raise LengthMismatchError(f"{truth.size} truths vs {pred.size} predictions")
    if truth.size == 0:
        raise EmptyError("metrics need at least one observation")
    return truth, pred


def mae(truth, pred) -> float:
    """Mean absolute error, ``sum(|pred - truth|) / n``."""
    truth, pred = _pair(truth, pred)
    return float(np.mean(np.abs(pred - truth)))


def rmspe(truth, pred) -> float:
    """Root mean square prediction error, ``sqrt(sum((truth - pred)^2) / n)``."""
    truth, pred = _pair(truth, pred)
    d = np.abs(truth - pred)
    scale = float(d.max())
    if scale == 0.0:
        return 0.0
    # scaled so tiny differences do not underflow to zero when squared
    d = d / scale
    return scale * math.sqrt(float(np.mean(d * d)))


@dataclass(frozen=True)
class ReportRow:
    method_name: str
    mae: float
    rmspe: float


@dataclass(frozen=True)
class EvalReport:
    rows: tuple
    seed: int
    n_train: int
    n_test: int
    config_digest: str

    def row(self, name):
        for r in self.rows:
            if r.method_name == name:
                return r
        raise KeyError(name)


@dataclass(frozen=True)
class PreparedData:
    """Encoded data split and standardized with train-fitted parameters."""

    split: SplitIndices
    params: PreprocessParams
    feature_names: tuple
    X_train: np.ndarray
    X_test: np.ndarray
    y_train: np.ndarray
    y_test: np.ndarray


def prepare(X: FeatureMatrix, y, ratio: float, seed: int) -> PreparedData:
    """Split, then fit imputation and scaling on the train rows and apply to both sides."""
    y = np.asarray(y, dtype=float)
    if y.shape != (X.shape[0],):
        raise LengthMismatchError(f"{X.shape[0]} feature rows vs {y.size} targets")
    split = split_indices(X.shape[0], ratio, seed)
    params = fit_preprocess(X, split)
    Z = params.apply(X).values
    train, test = list(split.train), list(split.test)
    return PreparedData(split, params, X.feature_names, Z[train], Z[test], y[train], y[test])


def labelled_matrix(ds: Dataset):
    X, y = encode_features(ds)
    if y is None:
        raise DataError(f"{ds.source_name}: gross_loss_pct is required for training/evaluation")
    return X, y


def train_model(X: FeatureMatrix, y, config, ratio: float = 0.8, seed: int = 0):
    """Fit one method through the full pipeline.

    Returns ``(trained_model, test_mae, test_rmspe, prepared_data)``.
    """
    data = prepare(X, y, ratio, seed)
    fitted = fit_method(config, data.X_train, data.y_train, seed)
    model = TrainedModel(fitted, data.params, tuple(data.feature_names), int(seed))
    pred = predict(model, data.X_test)
    return model, mae(data.y_test, pred), rmspe(data.y_test, pred), data


def config_digest(methods, ratio, seed) -> str:
    doc = {
        "ratio": float(ratio),
        "seed": int(seed),
        "methods": [{"kind": regressors.kind_of(m), **asdict(m)} for m in methods],
    }
    text = json.dumps(doc, sort_keys=True, separators=(",", ":"), default=list)
    return hashlib.sha256(text.encode()).hexdigest()


def compare_models(ds, methods=None, ratio: float = 0.8, seed: int = 0) -> EvalReport:
    """Fit every method on one shared split and score it on the held-out rows.

    ``ds`` may be a :class:`Dataset` or an ``(FeatureMatrix, targets)`` pair.
    Rows follow the order of ``methods`` (default: linear, forest, tree, KNN).
    """
    if methods is None:
        methods = regressors.default_methods()
    X, y = labelled_matrix(ds) if isinstance(ds, Dataset) else ds
    data = prepare(X, y, ratio, seed)
    rows = []
    for config in methods:
        name = method_name(config)
        try:
            fitted = fit_method(config, data.X_train, data.y_train, seed)
            pred = predict(fitted, data.X_test)
        except DataError as exc:
            exc.args = (f"{name}: {exc}",)
            raise
        rows.append(ReportRow(name, mae(data.y_test, pred), rmspe(data.y_test, pred)))
    return EvalReport(
        tuple(rows),
        int(seed),
        len(data.split.train),
        len(data.split.test),
        config_digest(methods, ratio, seed),
    )
