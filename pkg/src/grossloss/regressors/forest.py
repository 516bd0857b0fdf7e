"""Random forest: bagged CART trees with per-node feature subsampling."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from ..errors import WidthMismatchError
from ..rng import SplitMix64, derive_seed
from .tree import TreeConfig, grow, predict_tree


@dataclass(frozen=True)
class ForestConfig:
    """Forest hyperparameters.

    ``features_per_split=None`` resolves to ``max(1, p // 3)`` at fit time;
    the fitted model stores the resolved value.
    """

    n_trees: int = 100
    bootstrap: bool = True
    features_per_split: Optional[int] = None
    min_samples_leaf: int = 1
    max_depth: Optional[int] = None

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if self.features_per_split is not None and self.features_per_split < 1:
            raise ValueError("features_per_split must be >= 1")

    def resolve(self, n_features):
        m = self.features_per_split
        if m is None:
            m = max(1, n_features // 3)
        if not 1 <= m <= n_features:
            raise ValueError(f"features_per_split={m} outside [1, {n_features}]")
        return replace(self, features_per_split=m)

    @property
    def tree_config(self):
        return TreeConfig(self.min_samples_leaf, self.max_depth)


@dataclass(frozen=True)
class ForestModel:
    trees: tuple
    config: ForestConfig
    master_seed: int
    n_features: int

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise WidthMismatchError(f"forest expects {self.n_features} columns, got {X.shape}")
        per_tree = np.stack([predict_tree(t, X, self.n_features) for t in self.trees])
        # the exact mean lies between the extreme tree outputs; clipping removes
        # rounding (e.g. mean of ten equal values landing one ulp above them)
        return np.clip(per_tree.mean(axis=0), per_tree.min(axis=0), per_tree.max(axis=0))


def _fit_one(X, y, config, seed):
    rng = SplitMix64(seed)
    n, p = X.shape
    if config.bootstrap:
        rows = np.array([rng.below(n) for _ in range(n)], dtype=int)
        X, y = X[rows], y[rows]
    m = config.features_per_split
    return grow(X, y, config.tree_config, feature_sampler=lambda p_: rng.sample(p_, m))


def forest_fit(X, y, config: ForestConfig = ForestConfig(), master_seed: int = 0) -> ForestModel:
    """Grow ``config.n_trees`` independent trees.

    Tree ``t`` draws everything (bootstrap rows, then node feature subsets in
    depth-first order) from ``SplitMix64(derive_seed(master_seed, t))``, so
    the forest is a pure function of the inputs and ``master_seed``.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0 or y.shape != (X.shape[0],):
        raise ValueError("forest_fit needs a non-empty 2-D X and matching 1-D y")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise ValueError("forest_fit requires finite, imputed inputs")
    config = config.resolve(X.shape[1])
    trees = tuple(
        _fit_one(X, y, config, derive_seed(master_seed, t)) for t in range(config.n_trees)
    )
    return ForestModel(trees, config, int(master_seed), X.shape[1])
