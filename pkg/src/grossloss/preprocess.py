"""Train-fitted imputation, z-score scaling and the seeded train/test split.

Every ``*_fit`` function takes the row indices it may look at and reads
nothing else, so parameters fitted on the training split are unaffected by
the test rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    AllMissingError,
    DegenerateSplitError,
    EmptySelectionError,
    WidthMismatchError,
)
from .rng import SplitMix64
from .schema_io import FeatureMatrix


@dataclass(frozen=True)
class ImputationParams:
    fill_values: tuple


@dataclass(frozen=True)
class ScalerParams:
    means: tuple
    stds: tuple
    zero_variance_flags: tuple

    def inverse(self, Z):
        """Map standardized values back to the original units (flagged columns give ``u``)."""
        return np.asarray(Z, dtype=float) * np.array(self.stds) + np.array(self.means)


@dataclass(frozen=True)
class SplitIndices:
    train: tuple
    test: tuple
    seed: int
    ratio: float


@dataclass(frozen=True)
class PreprocessParams:
    """Everything needed to turn an encoded matrix into model input."""

    imputation: ImputationParams
    scaler: ScalerParams
    split_seed: int
    split_ratio: float

    def apply(self, X: FeatureMatrix) -> FeatureMatrix:
        return scaler_apply(self.scaler, impute_apply(self.imputation, X))


def _values(X):
    return X.values if isinstance(X, FeatureMatrix) else np.asarray(X, dtype=float)


def _select(X, restrict_to):
    values = _values(X)
    rows = np.asarray(restrict_to, dtype=int)
    if rows.size == 0:
        raise EmptySelectionError("restrict_to is empty")
    if rows.min() < 0 or rows.max() >= values.shape[0]:
        raise IndexError(f"restrict_to has indices outside [0, {values.shape[0]})")
    return values[rows]


def _names(X, j):
    if isinstance(X, FeatureMatrix):
        return X.feature_names[j]
    return f"column {j}"


def impute_fit(X, restrict_to) -> ImputationParams:
    """Column fills from the selected rows.

    A column whose observed values are all 0 or 1 is treated as binary and
    filled with its mode (ties go to 0); any other column gets its mean.
    """
    sub = _select(X, restrict_to)
    fills = []
    for j in range(sub.shape[1]):
        col = sub[:, j]
        observed = col[~np.isnan(col)]
        if observed.size == 0:
            raise AllMissingError(_names(X, j))
        if np.all((observed == 0.0) | (observed == 1.0)):
            ones = int(np.count_nonzero(observed))
            fills.append(1.0 if ones > observed.size - ones else 0.0)
        else:
            fills.append(float(np.mean(observed)))
    return ImputationParams(tuple(fills))


def impute_apply(params: ImputationParams, X):
    values = _values(X)
    if values.shape[1] != len(params.fill_values):
        raise WidthMismatchError(
            f"matrix has {values.shape[1]} columns, imputation expects {len(params.fill_values)}"
        )
    fill = np.broadcast_to(np.array(params.fill_values), values.shape)
    out = np.where(np.isnan(values), fill, values)
    return X.with_values(out) if isinstance(X, FeatureMatrix) else out


def scaler_fit(X, restrict_to) -> ScalerParams:
    """Per-column mean and population standard deviation of the selected rows.

    Constant columns are flagged and stored with ``s = 1``.
    """
    sub = _select(X, restrict_to)
    if np.isnan(sub).any():
        raise ValueError("scaler_fit requires imputed data (found missing cells)")
    means = sub.mean(axis=0)
    stds = sub.std(axis=0)
    constant = (sub.max(axis=0) == sub.min(axis=0)) | (stds == 0.0)
    stds = np.where(constant, 1.0, stds)
    return ScalerParams(
        tuple(float(v) for v in means),
        tuple(float(v) for v in stds),
        tuple(bool(v) for v in constant),
    )


def scaler_apply(params: ScalerParams, X):
    values = _values(X)
    if values.shape[1] != len(params.means):
        raise WidthMismatchError(
            f"matrix has {values.shape[1]} columns, scaler expects {len(params.means)}"
        )
    if np.isnan(values).any():
        raise ValueError("scaler_apply requires imputed data (found missing cells)")
    z = (values - np.array(params.means)) / np.array(params.stds)
    z[:, np.array(params.zero_variance_flags, dtype=bool)] = 0.0
    return X.with_values(z) if isinstance(X, FeatureMatrix) else z


def split_indices(n: int, ratio: float, seed: int) -> SplitIndices:
    """Shuffle ``0..n-1`` with SplitMix64(seed); the first ``floor(ratio*n)`` go to train."""
    if not 0.0 < ratio < 1.0:
        raise DegenerateSplitError(f"ratio must lie in (0, 1), got {ratio}")
    # decimal value of ratio, so 0.29 * 100 floors to 29 rather than 28
    n_train = math.floor(Fraction(repr(float(ratio))) * n)
    if n < 2 or n_train < 1 or n - n_train < 1:
        raise DegenerateSplitError(
            f"n={n}, ratio={ratio} leaves {n_train} train and {n - n_train} test rows"
        )
    order = SplitMix64(seed).shuffle(list(range(n)))
    return SplitIndices(
        tuple(sorted(order[:n_train])), tuple(sorted(order[n_train:])), int(seed), float(ratio)
    )


def fit_preprocess(X: FeatureMatrix, split: SplitIndices) -> PreprocessParams:
    """Fit imputation then scaling on the training rows of ``split``."""
    imputation = impute_fit(X, split.train)
    imputed = impute_apply(imputation, X)
    scaler = scaler_fit(imputed, split.train)
    return PreprocessParams(imputation, scaler, split.seed, split.ratio)
