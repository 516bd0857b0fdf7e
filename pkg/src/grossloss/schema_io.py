"""Ring attribute schema, CSV ingestion and numeric encoding.

CSV contract
------------
UTF-8, comma separated, one header row, ``.`` as decimal separator, an empty
cell means the value is missing.  The header must name every attribute
column below exactly (case-sensitive); ``gross_loss_pct`` is required for
training data and may be omitted in files used for prediction.  Column order
in the file is free; :func:`write_csv` always emits :data:`CSV_COLUMNS` order.

Metal cells use ``<karat>k-<code>`` (``14k-WG``), case-insensitive, with
codes WG, YG, PG, SV, PT, PD and karat in 8..24.  Booleans are ``0``/``1``
(``true``/``false`` are also accepted on input).

Encoded feature order
---------------------
:data:`FEATURE_NAMES` is the fixed column order produced by
:func:`encode_features`: attributes pass through in table order, except that
the metal cell becomes one ``karat`` column followed by six one-hot
``metal_<code>`` columns.  Tone stays a single ordinal column and booleans
become 0/1.  That is 24 attribute columns + karat + 6 one-hot = 31 columns.
"""

from __future__ import annotations

import csv
import enum
import io
import math
import re
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import MixedTargetError, ParseError, RowError, SchemaError

SCHEMA_VERSION = 1
MISSING = None


class Metal(enum.Enum):
    WG = "white gold"
    YG = "yellow gold"
    PG = "pink gold"
    SV = "silver"
    PT = "platinum"
    PD = "palladium"


METAL_CODES = tuple(m.name for m in Metal)
KARAT_RANGE = (8, 24)


@dataclass(frozen=True)
class MetalSpec:
    karat: int
    metal: Metal

    def __post_init__(self):
        lo, hi = KARAT_RANGE
        if not lo <= self.karat <= hi:
            raise ParseError(f"karat {self.karat} outside [{lo}, {hi}]")

    def __str__(self):
        return f"{self.karat}k-{self.metal.name}"


_METAL_RE = re.compile(r"^\s*(\d+)\s*k\s*-\s*([a-z]{2})\s*$", re.IGNORECASE)


def parse_metal(text: str) -> MetalSpec:
    """Parse ``"14k-WG"`` style text into a :class:`MetalSpec`."""
    m = _METAL_RE.match(text)
    if not m:
        raise ParseError(f"metal {text!r} is not of the form '<karat>k-<code>'")
    code = m.group(2).upper()
    if code not in METAL_CODES:
        raise ParseError(f"unknown metal code {code!r} in {text!r}")
    return MetalSpec(int(m.group(1)), Metal[code])


# (record field, CSV column, kind); kinds: real, int, bool, metal
_FIELD_SPECS = (
    ("volume", "volume_mm3", "real"),
    ("surface_area", "surface_area_mm2", "real"),
    ("metal", "metal", "metal"),
    ("weight_per_piece", "weight_per_piece_g", "real"),
    ("total_lot_quantity", "total_lot_quantity", "int"),
    ("total_weight_of_lot", "total_weight_of_lot_g", "real"),
    ("inner_diameter", "inner_diameter_mm", "real"),
    ("outer_diameter", "outer_diameter_mm", "real"),
    ("min_shank_thickness", "min_shank_thickness_mm", "real"),
    ("max_shank_thickness", "max_shank_thickness_mm", "real"),
    ("min_shank_width", "min_shank_width_mm", "real"),
    ("max_shank_width", "max_shank_width_mm", "real"),
    ("total_height", "total_height_mm", "real"),
    ("top_height", "top_height_mm", "real"),
    ("num_components", "num_components", "int"),
    ("num_rings", "num_rings", "int"),
    ("tone", "tone", "int"),
    ("true_miracle", "true_miracle", "bool"),
    ("num_true_miracle", "num_true_miracle", "int"),
    ("diamonds_set", "diamonds_set", "int"),
    ("filigree", "filigree", "bool"),
    ("j_back", "j_back", "bool"),
    ("gallery", "gallery", "bool"),
    ("fake_beads", "fake_beads", "int"),
    ("plating", "plating", "bool"),
)
TARGET_FIELD = "gross_loss"
TARGET_COLUMN = "gross_loss_pct"
PREDICTION_COLUMN = "predicted_gross_loss_pct"

ATTRIBUTE_COLUMNS = tuple(col for _, col, _ in _FIELD_SPECS)
CSV_COLUMNS = ATTRIBUTE_COLUMNS + (TARGET_COLUMN,)
_COLUMN_TO_SPEC = {col: (name, kind) for name, col, kind in _FIELD_SPECS}
_COLUMN_TO_SPEC[TARGET_COLUMN] = (TARGET_FIELD, "real")


def _feature_names():
    names = []
    for name, _, kind in _FIELD_SPECS:
        if kind == "metal":
            names.append("karat")
            names.extend(f"metal_{code}" for code in METAL_CODES)
        else:
            names.append(name)
    return tuple(names)


FEATURE_NAMES = _feature_names()
N_FEATURES = len(FEATURE_NAMES)


@dataclass(frozen=True)
class RingRecord:
    """One ring: the 25 CAD/production attributes plus the optional target.

    Any attribute except ``metal`` may be ``None`` (missing).  ``gross_loss``
    is the percent of lot metal weight lost, ``None`` for records to predict.
    """

    volume: Optional[float]
    surface_area: Optional[float]
    metal: MetalSpec
    weight_per_piece: Optional[float]
    total_lot_quantity: Optional[int]
    total_weight_of_lot: Optional[float]
    inner_diameter: Optional[float]
    outer_diameter: Optional[float]
    min_shank_thickness: Optional[float]
    max_shank_thickness: Optional[float]
    min_shank_width: Optional[float]
    max_shank_width: Optional[float]
    total_height: Optional[float]
    top_height: Optional[float]
    num_components: Optional[int]
    num_rings: Optional[int]
    tone: Optional[int]
    true_miracle: Optional[bool]
    num_true_miracle: Optional[int]
    diamonds_set: Optional[int]
    filigree: Optional[bool]
    j_back: Optional[bool]
    gallery: Optional[bool]
    fake_beads: Optional[int]
    plating: Optional[bool]
    gross_loss: Optional[float] = None

    def violations(self) -> list[str]:
        """Return every domain or cross-field rule this record breaks."""
        out = []

        def check(field_name, ok, rule):
            value = getattr(self, field_name)
            if value is not None and not ok(value):
                out.append(f"{field_name}={value!r} violates {rule}")

        for name in ("volume", "surface_area", "weight_per_piece", "total_weight_of_lot"):
            check(name, lambda v: v > 0, "> 0")
        for name in ("total_lot_quantity", "num_components", "num_rings"):
            check(name, lambda v: v >= 1, ">= 1")
        for name in ("num_true_miracle", "diamonds_set", "fake_beads"):
            check(name, lambda v: v >= 0, ">= 0")
        check("tone", lambda v: v in (1, 2, 3), "in {1, 2, 3}")
        check(TARGET_FIELD, lambda v: 0 <= v < 100, "in [0, 100)")

        def ordered(lo, hi, strict):
            a, b = getattr(self, lo), getattr(self, hi)
            if a is None or b is None:
                return
            if (a >= b) if strict else (a > b):
                op = "<" if strict else "<="
                out.append(f"{lo}={a!r} {op} {hi}={b!r} does not hold")

        ordered("inner_diameter", "outer_diameter", strict=True)
        ordered("min_shank_thickness", "max_shank_thickness", strict=False)
        ordered("min_shank_width", "max_shank_width", strict=False)
        ordered("top_height", "total_height", strict=False)
        if self.true_miracle is False and self.num_true_miracle not in (None, 0):
            out.append(
                f"true_miracle=False requires num_true_miracle=0, got {self.num_true_miracle}"
            )
        return out


@dataclass(frozen=True)
class Dataset:
    records: tuple
    source_name: str = "<memory>"
    schema_version: int = SCHEMA_VERSION

    def __len__(self):
        return len(self.records)

    @property
    def has_targets(self):
        return bool(self.records) and all(r.gross_loss is not None for r in self.records)


@dataclass(frozen=True)
class FeatureMatrix:
    """``n x p`` float matrix; ``NaN`` marks a missing cell."""

    values: np.ndarray
    feature_names: tuple

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError("FeatureMatrix values must be 2-D")
        if values.shape[1] != len(self.feature_names):
            raise ValueError(
                f"{values.shape[1]} columns but {len(self.feature_names)} feature names"
            )
        if len(set(self.feature_names)) != len(self.feature_names):
            raise ValueError("feature names must be unique")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def shape(self):
        return self.values.shape

    def rows(self, indices) -> "FeatureMatrix":
        return FeatureMatrix(self.values[np.asarray(indices, dtype=int)], self.feature_names)

    def with_values(self, values) -> "FeatureMatrix":
        return FeatureMatrix(values, self.feature_names)


# ---------------------------------------------------------------- parsing


def _parse_cell(text, kind):
    text = text.strip()
    if text == "":
        return MISSING
    if kind == "real":
        value = float(text)
        if not math.isfinite(value):
            raise ValueError(f"non-finite number {text!r}")
        return value
    if kind == "int":
        return int(text)
    if kind == "bool":
        low = text.lower()
        if low in ("1", "true"):
            return True
        if low in ("0", "false"):
            return False
        raise ValueError(f"{text!r} is not a boolean (0/1)")
    if kind == "metal":
        return parse_metal(text)
    raise AssertionError(kind)


def _check_header(header, require_target, ignore_target):
    seen = set()
    for col in header:
        if col in seen:
            raise SchemaError(f"duplicate column {col!r}")
        seen.add(col)
        if col not in _COLUMN_TO_SPEC:
            raise SchemaError(f"unknown column {col!r}")
    missing = [c for c in ATTRIBUTE_COLUMNS if c not in seen]
    if require_target and not ignore_target and TARGET_COLUMN not in seen:
        missing.append(TARGET_COLUMN)
    if missing:
        raise SchemaError(f"missing column(s): {', '.join(missing)}")


def _decode(raw) -> str:
    if isinstance(raw, (bytes, bytearray)):
        data = bytes(raw)
    elif isinstance(raw, str):
        return raw
    else:
        data = raw.read()
        if isinstance(data, str):
            return data
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise SchemaError(f"input is not UTF-8: {exc}") from exc


def is_blank_row(cells):
    return not cells or (len(cells) == 1 and not cells[0].strip())


def _iter_rows(raw, require_target, ignore_target):
    """Yield ``(line_number, fields-or-error)`` after validating the header."""
    reader = csv.reader(io.StringIO(_decode(raw), newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("input is empty; a header row is required") from None
    _check_header(header, require_target, ignore_target)
    for cells in reader:
        line = reader.line_num
        if is_blank_row(cells):
            continue
        if len(cells) != len(header):
            yield line, RowError(
                f"expected {len(header)} cells, found {len(cells)}", row=line
            )
            continue
        values = {}
        error = None
        for col, cell in zip(header, cells):
            if ignore_target and col == TARGET_COLUMN:
                continue
            name, kind = _COLUMN_TO_SPEC[col]
            try:
                values[name] = _parse_cell(cell, kind)
            except (ValueError, ParseError) as exc:
                error = RowError(f"cannot parse {cell!r}: {exc}", row=line, column=col)
                break
        if error is not None:
            yield line, error
            continue
        if values.get("metal") is None:
            yield line, RowError("metal may not be empty", row=line, column="metal")
            continue
        yield line, RingRecord(**values)


def collect_issues(raw, *, require_target=False, ignore_target=False):
    """Parse leniently and report every row-level problem.

    Returns ``(records, issues)`` where ``issues`` is a list of
    ``(line_number, message)``; header problems still raise
    :class:`SchemaError`.
    """
    records, issues = [], []
    for line, item in _iter_rows(raw, require_target, ignore_target):
        if isinstance(item, RowError):
            issues.append((line, str(item)))
            continue
        problems = item.violations()
        issues.extend((line, f"row {line}: {p}") for p in problems)
        if not problems:
            records.append(item)
    return records, issues


def parse_csv(raw, source_name="<stream>", *, require_target=False, ignore_target=False) -> Dataset:
    """Parse a ring CSV (bytes, text, or a file object) into a :class:`Dataset`.

    Raises :class:`SchemaError` for header problems and :class:`RowError`
    (with the 1-based file line number) for the first bad row.  With
    ``ignore_target`` the ``gross_loss_pct`` column is skipped entirely.
    """
    records = []
    for line, item in _iter_rows(raw, require_target, ignore_target):
        if isinstance(item, RowError):
            raise item
        problems = item.violations()
        if problems:
            raise RowError("; ".join(problems), row=line)
        records.append(item)
    return Dataset(tuple(records), source_name)


def read_csv(path: Union[str, Path], **kwargs) -> Dataset:
    path = Path(path)
    return parse_csv(path.read_bytes(), source_name=str(path), **kwargs)


def _format_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, MetalSpec)):
        return str(value)
    return repr(float(value))


def write_csv(ds: Dataset, include_target: Optional[bool] = None) -> str:
    """Serialize records in canonical column order (inverse of :func:`parse_csv`)."""
    if include_target is None:
        include_target = any(r.gross_loss is not None for r in ds.records)
    columns = CSV_COLUMNS if include_target else ATTRIBUTE_COLUMNS
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in ds.records:
        writer.writerow(_format_cell(getattr(rec, _COLUMN_TO_SPEC[c][0])) for c in columns)
    return buf.getvalue()


# --------------------------------------------------------------- encoding


def encode_record(rec: RingRecord) -> list:
    row = []
    for name, _, kind in _FIELD_SPECS:
        value = getattr(rec, name)
        if kind == "metal":
            row.append(float(value.karat))
            row.extend(1.0 if value.metal.name == code else 0.0 for code in METAL_CODES)
        elif value is None:
            row.append(math.nan)
        else:
            row.append(float(value))
    return row


def encode_features(ds: Dataset):
    """Encode records as ``(FeatureMatrix, targets-or-None)``.

    Targets are returned only when every record has ``gross_loss``; a mix
    of labelled and unlabelled records raises :class:`MixedTargetError`.
    """
    if not ds.records:
        raise ValueError("cannot encode an empty dataset")
    X = np.array([encode_record(r) for r in ds.records], dtype=float)
    labelled = [r.gross_loss is not None for r in ds.records]
    if all(labelled):
        y = np.array([r.gross_loss for r in ds.records], dtype=float)
    elif any(labelled):
        missing = [i for i, ok in enumerate(labelled) if not ok]
        raise MixedTargetError(
            f"{len(missing)} of {len(labelled)} records lack gross_loss "
            f"(first at record index {missing[0]})"
        )
    else:
        y = None
    return FeatureMatrix(X, FEATURE_NAMES), y


RECORD_FIELDS = tuple(f.name for f in fields(RingRecord))
