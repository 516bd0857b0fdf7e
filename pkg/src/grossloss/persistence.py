"""Versioned JSON documents for trained models and comparison reports.

Both documents are written with a fixed key order, ``repr``-precision floats
(so every double round-trips exactly) and write-temp-then-rename, which makes
identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import FormatError, ModelIOError, VersionError
from .preprocess import ImputationParams, PreprocessParams, ScalerParams
from .regressors import (
    ForestConfig,
    ForestModel,
    KnnModel,
    Leaf,
    LinearModel,
    Split,
    TrainedModel,
    TreeConfig,
    TreeModel,
)

FORMAT_VERSION = 1
REPORT_SCHEMA_VERSION = 1


def atomic_write_text(path, text):
    path = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    except OSError as exc:
        raise ModelIOError(f"cannot write {path}: {exc}") from exc
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        Path(tmp).unlink(missing_ok=True)
        raise ModelIOError(f"cannot write {path}: {exc}") from exc


def _dumps(doc):
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


# ------------------------------------------------------------------ encode


def _node_to_doc(node):
    if isinstance(node, Leaf):
        return {"value": node.value, "count": node.count}
    return {
        "feature_index": node.feature_index,
        "threshold": node.threshold,
        "left": _node_to_doc(node.left),
        "right": _node_to_doc(node.right),
    }


def _tree_config_doc(cfg):
    return {"min_samples_leaf": cfg.min_samples_leaf, "max_depth": cfg.max_depth}


def _payload(model):
    if isinstance(model, LinearModel):
        return {
            "intercept": model.intercept,
            "coefficients": list(model.coefficients),
            "ridge_eps": model.ridge_eps,
        }
    if isinstance(model, TreeModel):
        return {"config": _tree_config_doc(model.config), "root": _node_to_doc(model.root)}
    if isinstance(model, ForestModel):
        cfg = model.config
        return {
            "config": {
                "n_trees": cfg.n_trees,
                "bootstrap": cfg.bootstrap,
                "features_per_split": cfg.features_per_split,
                "min_samples_leaf": cfg.min_samples_leaf,
                "max_depth": cfg.max_depth,
            },
            "master_seed": model.master_seed,
            "trees": [_node_to_doc(t) for t in model.trees],
        }
    if isinstance(model, KnnModel):
        return {
            "k": model.k,
            "train_features": [[float(v) for v in row] for row in model.train_features],
            "train_targets": [float(v) for v in model.train_targets],
        }
    raise TypeError(type(model).__name__)


def model_to_doc(trained: TrainedModel) -> dict:
    pp = trained.preprocess
    return {
        "format_version": FORMAT_VERSION,
        "model_kind": trained.kind,
        "preprocess": {
            "split_seed": pp.split_seed,
            "split_ratio": pp.split_ratio,
            "fill_values": list(pp.imputation.fill_values),
            "means": list(pp.scaler.means),
            "stds": list(pp.scaler.stds),
            "zero_variance_flags": list(pp.scaler.zero_variance_flags),
        },
        "feature_names": list(trained.feature_names),
        "payload": _payload(trained.model),
        "training_seed": trained.training_seed,
    }


def dumps_model(trained: TrainedModel) -> str:
    return _dumps(model_to_doc(trained))


def save_model(trained: TrainedModel, path) -> None:
    atomic_write_text(path, dumps_model(trained))


# ------------------------------------------------------------------ decode


def _floats(values, n=None):
    out = tuple(float(v) for v in values)
    if n is not None and len(out) != n:
        raise FormatError(f"expected {n} numbers, found {len(out)}")
    return out


def _doc_to_node(doc):
    if "value" in doc:
        return Leaf(float(doc["value"]), int(doc["count"]))
    return Split(
        int(doc["feature_index"]),
        float(doc["threshold"]),
        _doc_to_node(doc["left"]),
        _doc_to_node(doc["right"]),
    )


def _model_from_payload(kind, payload, p):
    if kind == "linear":
        return LinearModel(
            float(payload["intercept"]),
            _floats(payload["coefficients"], p),
            float(payload["ridge_eps"]),
        )
    if kind == "tree":
        cfg = payload["config"]
        config = TreeConfig(cfg["min_samples_leaf"], cfg["max_depth"])
        return TreeModel(_doc_to_node(payload["root"]), p, config)
    if kind == "forest":
        config = ForestConfig(**payload["config"])
        trees = tuple(_doc_to_node(t) for t in payload["trees"])
        if len(trees) != config.n_trees:
            raise FormatError(f"forest lists {len(trees)} trees but n_trees={config.n_trees}")
        return ForestModel(trees, config, int(payload["master_seed"]), p)
    if kind == "knn":
        X = np.array(payload["train_features"], dtype=float).reshape(-1, p)
        y = np.array(payload["train_targets"], dtype=float)
        X.flags.writeable = False
        y.flags.writeable = False
        if y.shape != (X.shape[0],) or not 1 <= int(payload["k"]) <= X.shape[0]:
            raise FormatError("knn payload has inconsistent rows, targets or k")
        return KnnModel(X, y, int(payload["k"]))
    raise FormatError(f"unknown model_kind {kind!r}")


def model_from_doc(doc) -> TrainedModel:
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise FormatError("not a model document (no format_version)")
    if doc["format_version"] != FORMAT_VERSION:
        raise VersionError(
            f"unsupported format_version {doc['format_version']!r} (expected {FORMAT_VERSION})"
        )
    try:
        names = tuple(str(n) for n in doc["feature_names"])
        p = len(names)
        pp = doc["preprocess"]
        params = PreprocessParams(
            ImputationParams(_floats(pp["fill_values"], p)),
            ScalerParams(
                _floats(pp["means"], p),
                _floats(pp["stds"], p),
                tuple(bool(v) for v in pp["zero_variance_flags"]),
            ),
            int(pp["split_seed"]),
            float(pp["split_ratio"]),
        )
        if len(params.scaler.zero_variance_flags) != p:
            raise FormatError("zero_variance_flags length does not match feature_names")
        model = _model_from_payload(doc["model_kind"], doc["payload"], p)
        return TrainedModel(model, params, names, int(doc["training_seed"]))
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed model document: {exc!r}") from exc


def load_model(path) -> TrainedModel:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelIOError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc
    try:
        return model_from_doc(doc)
    except FormatError as exc:
        exc.args = (f"{path}: {exc}",)
        raise


# ------------------------------------------------------------------ reports


def report_to_doc(report) -> dict:
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "rows": [
            {"method_name": r.method_name, "mae": r.mae, "rmspe": r.rmspe} for r in report.rows
        ],
        "seed": report.seed,
        "n_train": report.n_train,
        "n_test": report.n_test,
        "config_digest": report.config_digest,
    }


def dumps_report(report) -> str:
    return _dumps(report_to_doc(report))


def save_report(report, path) -> None:
    atomic_write_text(path, dumps_report(report))


def format_report_table(report) -> str:
    """Plain-text table: one line per method with MAE and RMSPE."""
    width = max(len("Method"), *(len(r.method_name) for r in report.rows))
    lines = [
        f"{'Method':<{width}}  {'Mean Absolute Error':>19}  {'RMSPE':>10}",
        f"{'-' * width}  {'-' * 19}  {'-' * 10}",
    ]
    lines += [f"{r.method_name:<{width}}  {r.mae:>19.4f}  {r.rmspe:>10.4f}" for r in report.rows]
    lines.append(f"(seed {report.seed}, {report.n_train} train / {report.n_test} test rows)")
    return "\n".join(lines)
