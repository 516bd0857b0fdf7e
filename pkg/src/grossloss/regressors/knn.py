"""K-nearest-neighbour regression and cross-validated choice of K."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidFoldsError, InvalidKError, WidthMismatchError
from ..rng import SplitMix64


@dataclass(frozen=True)
class KnnModel:
    train_features: np.ndarray
    train_targets: np.ndarray
    k: int

    @property
    def n_features(self):
        return self.train_features.shape[1]

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise WidthMismatchError(f"knn expects {self.n_features} columns, got {X.shape}")
        return np.array([self._predict_row(q) for q in X])

    def _predict_row(self, q):
        stored = self.train_features
        sq = np.zeros(stored.shape[0])
        for j in range(stored.shape[1]):  # fixed left-to-right summation order
            d = stored[:, j] - q[j]
            sq += d * d
        dist = np.sqrt(sq)
        # stable sort: equal distances keep the lower stored index first
        nearest = np.argsort(dist, kind="stable")[: self.k]
        return math.fsum(self.train_targets[nearest]) / self.k


def knn_fit(X, y, k: int) -> KnnModel:
    X = np.array(X, dtype=float)
    y = np.array(y, dtype=float)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise ValueError("knn_fit needs a 2-D X and matching 1-D y")
    if not np.isfinite(X).all():
        raise ValueError("knn_fit requires finite, imputed features")
    if not 1 <= k <= X.shape[0]:
        raise InvalidKError(f"k={k} outside [1, {X.shape[0]}]")
    X.flags.writeable = False
    y.flags.writeable = False
    return KnnModel(X, y, int(k))


def fold_assignment(n, folds, seed):
    """Fold id per row: shuffle ``0..n-1`` and deal positions round-robin."""
    order = SplitMix64(seed).shuffle(list(range(n)))
    assignment = np.empty(n, dtype=int)
    for position, row in enumerate(order):
        assignment[row] = position % folds
    return assignment


def cv_scores(X, y, k_candidates, folds, seed):
    """Mean held-out RMSPE per candidate K, as a dict ``{k: score}``."""
    from ..evaluation import rmspe

    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = X.shape[0]
    if not 2 <= folds <= n:
        raise InvalidFoldsError(f"folds={folds} outside [2, {n}]")
    k_candidates = list(k_candidates)
    if not k_candidates:
        raise InvalidKError("no candidate K values")
    k_max = n - math.ceil(n / folds)
    for k in k_candidates:
        if not 1 <= k <= k_max:
            raise InvalidKError(f"candidate k={k} outside [1, {k_max}] for n={n}, folds={folds}")

    assignment = fold_assignment(n, folds, seed)
    per_k = {k: [] for k in k_candidates}
    for f in range(folds):
        held = np.flatnonzero(assignment == f)
        kept = np.flatnonzero(assignment != f)
        for k in k_candidates:
            pred = knn_fit(X[kept], y[kept], k).predict(X[held])
            per_k[k].append(rmspe(y[held], pred))
    return {k: math.fsum(v) / folds for k, v in per_k.items()}


def select_k(X, y, k_candidates, folds: int, seed: int) -> int:
    """Candidate K with the lowest mean fold RMSPE; ties go to the smaller K.

    ``folds == n`` is leave-one-out.
    """
    scores = cv_scores(X, y, k_candidates, folds, seed)
    return min(scores, key=lambda k: (scores[k], k))


def default_k_candidates(n_train):
    return list(range(1, min(10, n_train - 1) + 1))
