import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grossloss.errors import MixedTargetError, ParseError, RowError, SchemaError
from grossloss.schema_io import (
    ATTRIBUTE_COLUMNS,
    CSV_COLUMNS,
    FEATURE_NAMES,
    Dataset,
    Metal,
    MetalSpec,
    collect_issues,
    encode_features,
    encode_record,
    parse_csv,
    parse_metal,
    write_csv,
)
from grossloss.synthetic import make_rings


def _csv(ds, **kw):
    return write_csv(ds, **kw).encode()


def _edit_cell(text, row, column, value):
    lines = text.splitlines()
    header = lines[0].split(",")
    cells = lines[row].split(",")
    cells[header.index(column)] = value
    lines[row] = ",".join(cells)
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ metal


@pytest.mark.parametrize(
    "text, karat, metal",
    [("14k-WG", 14, Metal.WG), ("9k-YG", 9, Metal.YG), ("18K-pg", 18, Metal.PG), ("24k-pt", 24, Metal.PT)],
)
def test_parse_metal(text, karat, metal):
    assert parse_metal(text) == MetalSpec(karat, metal)


@pytest.mark.parametrize("text", ["14 carat gold", "14k", "7k-WG", "25k-YG", "14k-XX", "", "k-WG"])
def test_parse_metal_rejects(text):
    with pytest.raises(ParseError):
        parse_metal(text)


def test_metal_str_roundtrip():
    for code in Metal:
        spec = MetalSpec(10, code)
        assert parse_metal(str(spec)) == spec


# -------------------------------------------------------------- parse_csv


def test_header_and_two_rows_preserve_order():
    ds = make_rings(2, seed=9)
    parsed = parse_csv(_csv(ds))
    assert len(parsed) == 2
    assert parsed.records == ds.records


def test_missing_column_is_named():
    text = write_csv(make_rings(2, seed=1)).replace("volume_mm3", "volume_cm3")
    with pytest.raises(SchemaError, match="volume_cm3"):
        parse_csv(text.encode())
    # drop the column entirely
    lines = [",".join(line.split(",")[1:]) for line in write_csv(make_rings(2, seed=1)).splitlines()]
    with pytest.raises(SchemaError, match="volume_mm3"):
        parse_csv("\n".join(lines).encode())


def test_header_is_case_sensitive():
    text = write_csv(make_rings(1, seed=1)).replace("tone", "Tone", 1)
    with pytest.raises(SchemaError):
        parse_csv(text.encode())


def test_duplicate_column():
    text = write_csv(make_rings(1, seed=1))
    header, row = text.splitlines()
    with pytest.raises(SchemaError, match="duplicate"):
        parse_csv(f"{header},tone\n{row},2\n".encode())


def test_empty_cell_becomes_missing():
    text = _edit_cell(write_csv(make_rings(3, seed=2)), 2, "surface_area_mm2", "")
    ds = parse_csv(text.encode())
    assert ds.records[1].surface_area is None
    assert ds.records[0].surface_area is not None


def test_unparseable_cell_reports_row_and_column():
    text = _edit_cell(write_csv(make_rings(3, seed=2)), 3, "num_rings", "two")
    with pytest.raises(RowError) as info:
        parse_csv(text.encode())
    assert info.value.row == 4  # file line: header is line 1
    assert info.value.column == "num_rings"


def test_row_length_mismatch():
    text = write_csv(make_rings(2, seed=2)).rstrip("\n") + ",extra\n"
    with pytest.raises(RowError) as info:
        parse_csv(text.encode())
    assert info.value.row == 3


def test_invariant_violation_is_row_error():
    text = _edit_cell(write_csv(make_rings(2, seed=2)), 1, "tone", "4")
    with pytest.raises(RowError, match="tone"):
        parse_csv(text.encode())


def test_true_miracle_count_rule():
    rec = dataclasses.replace(make_rings(1, seed=2).records[0], true_miracle=False, num_true_miracle=3)
    assert any("num_true_miracle" in v for v in rec.violations())


def test_cross_field_rules():
    rec = make_rings(1, seed=2).records[0]
    bad = dataclasses.replace(rec, inner_diameter=30.0, outer_diameter=20.0, top_height=99.0)
    msgs = " ".join(bad.violations())
    assert "inner_diameter" in msgs and "top_height" in msgs
    assert dataclasses.replace(rec, inner_diameter=None).violations() == []


def test_target_column_optional_for_prediction_files():
    ds = make_rings(3, seed=4, labelled=False)
    text = write_csv(ds)
    assert "gross_loss_pct" not in text.splitlines()[0]
    assert parse_csv(text.encode()).records == ds.records
    with pytest.raises(SchemaError, match="gross_loss_pct"):
        parse_csv(text.encode(), require_target=True)


def test_ignore_target_never_reads_the_column():
    text = _edit_cell(write_csv(make_rings(2, seed=4)), 1, "gross_loss_pct", "garbage")
    ds = parse_csv(text.encode(), ignore_target=True)
    assert all(r.gross_loss is None for r in ds.records)


def test_columns_in_any_order():
    ds = make_rings(3, seed=5)
    lines = write_csv(ds).splitlines()
    rows = [line.split(",") for line in lines]
    perm = list(reversed(range(len(rows[0]))))
    shuffled = "\n".join(",".join(r[i] for i in perm) for r in rows)
    assert parse_csv(shuffled.encode()).records == ds.records


def test_collect_issues_reports_every_row():
    text = write_csv(make_rings(4, seed=6))
    text = _edit_cell(text, 1, "tone", "7")
    text = _edit_cell(text, 3, "metal", "gold")
    records, issues = collect_issues(text.encode())
    assert len(records) == 2
    assert [line for line, _ in issues] == [2, 4]


def test_empty_input():
    with pytest.raises(SchemaError):
        parse_csv(b"")


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 15), drop=st.floats(0, 0.4))
def test_csv_round_trip(seed, n, drop):
    ds = make_rings(n, seed=seed)
    rng = np.random.default_rng(seed)
    holes = []
    for rec in ds.records:
        changes = {
            name: None
            for name in ("volume", "tone", "filigree", "top_height", "fake_beads")
            if rng.random() < drop
        }
        holes.append(dataclasses.replace(rec, **changes))
    ds = Dataset(tuple(holes))
    once = parse_csv(_csv(ds))
    twice = parse_csv(write_csv(once).encode())
    assert once.records == ds.records
    assert twice.records == once.records


# ---------------------------------------------------------- encode_features


def test_feature_layout():
    assert len(CSV_COLUMNS) == 26 and len(ATTRIBUTE_COLUMNS) == 25
    assert len(FEATURE_NAMES) == 31
    assert FEATURE_NAMES[2:9] == ("karat",) + tuple(f"metal_{m.name}" for m in Metal)


def test_one_hot_and_booleans():
    rec = dataclasses.replace(
        make_rings(1, seed=7).records[0],
        metal=MetalSpec(14, Metal.WG),
        filigree=True,
        plating=False,
        tone=2,
    )
    X, y = encode_features(Dataset((rec,)))
    row = dict(zip(X.feature_names, X.values[0]))
    assert [row[f"metal_{m.name}"] for m in Metal] == [1, 0, 0, 0, 0, 0]
    assert row["karat"] == 14.0
    assert row["filigree"] == 1.0 and row["plating"] == 0.0
    assert row["tone"] == 2.0
    assert y is not None and y[0] == rec.gross_loss


def test_missing_propagates():
    rec = dataclasses.replace(make_rings(1, seed=7).records[0], volume=None, gallery=None)
    X, _ = encode_features(Dataset((rec,)))
    row = dict(zip(X.feature_names, X.values[0]))
    assert math.isnan(row["volume"]) and math.isnan(row["gallery"])
    assert np.isnan(X.values).sum() == 2


def test_target_only_when_all_labelled():
    assert encode_features(make_rings(3, seed=1, labelled=False))[1] is None
    ds = make_rings(3, seed=1)
    mixed = Dataset((ds.records[0], dataclasses.replace(ds.records[1], gross_loss=None)))
    with pytest.raises(MixedTargetError):
        encode_features(mixed)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 12))
def test_encoding_width_one_hot_and_row_locality(seed, n):
    ds = make_rings(n, seed=seed)
    X, _ = encode_features(ds)
    assert X.values.shape == (n, 31)
    onehot = X.values[:, 3:9]
    assert np.all(onehot.sum(axis=1) == 1.0)
    assert set(np.unique(onehot)) <= {0.0, 1.0}
    for i, rec in enumerate(ds.records):
        assert np.array_equal(X.values[i], np.array(encode_record(rec)))
        alone, _ = encode_features(Dataset((rec,)))
        assert np.array_equal(alone.values[0], X.values[i])
