import json

import numpy as np
import pytest

from grossloss import regressors
from grossloss.errors import FormatError, ModelIOError, VersionError
from grossloss.evaluation import compare_models, train_model
from grossloss.persistence import (
    dumps_model,
    dumps_report,
    format_report_table,
    load_model,
    save_model,
    save_report,
)
from grossloss.regressors import ForestConfig, KnnConfig
from grossloss.schema_io import encode_features
from grossloss.synthetic import make_rings

CONFIGS = {
    "linear": regressors.LinearConfig(),
    "tree": regressors.TreeConfig(),
    "forest": ForestConfig(n_trees=7),
    "knn": KnnConfig(),
}


@pytest.fixture(params=list(CONFIGS))
def trained(request, rings):
    X, y = encode_features(rings)
    return train_model(X, y, CONFIGS[request.param], 0.8, 11)[0]


def test_round_trip_predictions_bit_identical(trained, tmp_path):
    path = tmp_path / "m.model"
    save_model(trained, path)
    loaded = load_model(path)
    X, _ = encode_features(make_rings(15, seed=99))
    assert np.array_equal(loaded.predict_encoded(X), trained.predict_encoded(X))
    assert loaded.preprocess == trained.preprocess
    assert loaded.feature_names == trained.feature_names
    assert dumps_model(loaded) == dumps_model(trained)


def test_save_twice_byte_identical(trained, tmp_path):
    save_model(trained, tmp_path / "a")
    save_model(trained, tmp_path / "b")
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()


def test_document_key_order(trained):
    doc = json.loads(dumps_model(trained))
    assert list(doc) == [
        "format_version",
        "model_kind",
        "preprocess",
        "feature_names",
        "payload",
        "training_seed",
    ]
    assert doc["format_version"] == 1 and doc["model_kind"] == trained.kind


def test_unwritable_path(trained, tmp_path):
    with pytest.raises(ModelIOError):
        save_model(trained, tmp_path / "missing-dir" / "m.model")


def test_version_error(trained, tmp_path):
    doc = json.loads(dumps_model(trained))
    doc["format_version"] = 2
    path = tmp_path / "v2.model"
    path.write_text(json.dumps(doc))
    with pytest.raises(VersionError):
        load_model(path)


def test_truncated_and_malformed(trained, tmp_path):
    text = dumps_model(trained)
    path = tmp_path / "t.model"
    path.write_text(text[: len(text) // 2])
    with pytest.raises(FormatError):
        load_model(path)
    doc = json.loads(text)
    del doc["payload"]
    path.write_text(json.dumps(doc))
    with pytest.raises(FormatError):
        load_model(path)
    with pytest.raises(ModelIOError):
        load_model(tmp_path / "nope.model")


def test_report_json_and_table(rings, tmp_path):
    report = compare_models(rings, seed=42)
    doc = json.loads(dumps_report(report))
    assert list(doc) == ["schema_version", "rows", "seed", "n_train", "n_test", "config_digest"]
    assert [r["method_name"] for r in doc["rows"]] == [r.method_name for r in report.rows]
    assert doc["rows"][0]["mae"] == report.rows[0].mae
    save_report(report, tmp_path / "r.json")
    save_report(report, tmp_path / "r2.json")
    assert (tmp_path / "r.json").read_bytes() == (tmp_path / "r2.json").read_bytes()
    table = format_report_table(report)
    assert "Mean Absolute Error" in table
    assert all(r.method_name in table for r in report.rows)
