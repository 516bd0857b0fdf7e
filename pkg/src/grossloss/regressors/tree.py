"""Greedy CART regression tree with a variance-reduction split criterion."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..errors import WidthMismatchError


@dataclass(frozen=True)
class Leaf:
    value: float
    count: int


@dataclass(frozen=True)
class Split:
    feature_index: int
    threshold: float
    left: "TreeNode"
    right: "TreeNode"


TreeNode = Union[Leaf, Split]


@dataclass(frozen=True)
class TreeConfig:
    min_samples_leaf: int = 1
    max_depth: Optional[int] = None

    def __post_init__(self):
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be >= 1")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be >= 0 or None")


@dataclass(frozen=True)
class TreeModel:
    root: TreeNode
    n_features: int
    config: TreeConfig = TreeConfig()

    def predict(self, X):
        return predict_tree(self.root, X, self.n_features)


# Costs within this fraction of the node's total squared deviation count as
# equal, so exact ties are not decided by rounding in the cumulative sums.
TIE_RTOL = 1e-12


def _midpoint(a, b):
    mid = 0.5 * a + 0.5 * b
    # adjacent floats can round the midpoint onto b, which would move b left
    return a if mid >= b else mid


def _best_split_on(xcol, ycol, min_leaf):
    """Lowest-cost split of one feature as ``(cost, threshold)`` or ``None``.

    Cost is the sum of child squared deviations, i.e. the size-weighted sum
    of child variances.  Equal costs (up to ``TIE_RTOL``) keep the lowest
    threshold.
    """
    n = xcol.size
    order = np.argsort(xcol, kind="stable")
    xs = xcol[order]
    ys = ycol[order] - ycol.mean()  # centred to limit cancellation in the cumulative sums
    left_n = np.arange(1, n, dtype=float)
    right_n = n - left_n
    csum = np.cumsum(ys)
    csq = np.cumsum(ys * ys)
    total, total_sq = csum[-1], csq[-1]
    left_sum, left_sq = csum[:-1], csq[:-1]
    right_sum, right_sq = total - left_sum, total_sq - left_sq
    cost = (left_sq - left_sum * left_sum / left_n) + (right_sq - right_sum * right_sum / right_n)

    valid = xs[1:] > xs[:-1]
    valid &= (left_n >= min_leaf) & (right_n >= min_leaf)
    if not valid.any():
        return None
    cost = np.where(valid, cost, np.inf)
    best = cost.min()
    i = int(np.argmax(cost <= best + _tie_tol(total_sq)))
    return float(cost[i]), _midpoint(float(xs[i]), float(xs[i + 1]))


def _tie_tol(total_sq):
    return TIE_RTOL * float(total_sq)


def grow(X, y, config: TreeConfig, feature_sampler=None, depth=0) -> TreeNode:
    """Recursively grow a tree on ``(X, y)``.

    ``feature_sampler(p)`` returns the candidate feature indices for one
    node; ``None`` means all features.  Candidates are scanned in ascending
    index order and a later feature replaces the incumbent only when its cost
    is lower by more than the tie tolerance, which gives the lowest-feature-then-lowest-threshold
    tie-break.  A node becomes a leaf when it is pure, has fewer than
    ``2 * min_samples_leaf`` rows, sits at ``max_depth``, or admits no split.
    """
    n, p = X.shape
    if np.all(y == y[0]):
        # exact value: a float mean of equal numbers can be off by an ulp
        return Leaf(float(y[0]), int(n))
    leaf = Leaf(float(np.mean(y)), int(n))
    if n < 2 * config.min_samples_leaf or (
        config.max_depth is not None and depth >= config.max_depth
    ):
        return leaf

    candidates = range(p) if feature_sampler is None else sorted(feature_sampler(p))
    tol = _tie_tol(np.sum((y - y.mean()) ** 2))
    best = None
    for j in candidates:
        found = _best_split_on(X[:, j], y, config.min_samples_leaf)
        if found is not None and (best is None or found[0] < best[0] - tol):
            best = (found[0], j, found[1])
    if best is None:
        return leaf

    _, j, threshold = best
    go_left = X[:, j] <= threshold
    return Split(
        j,
        threshold,
        grow(X[go_left], y[go_left], config, feature_sampler, depth + 1),
        grow(X[~go_left], y[~go_left], config, feature_sampler, depth + 1),
    )


def tree_fit(X, y, config: TreeConfig = TreeConfig()) -> TreeModel:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0 or y.shape != (X.shape[0],):
        raise ValueError("tree_fit needs a non-empty 2-D X and matching 1-D y")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise ValueError("tree_fit requires finite, imputed inputs")
    return TreeModel(grow(X, y, config), X.shape[1], config)


def _route(node, X, rows, out):
    while isinstance(node, Split):
        go_left = X[rows, node.feature_index] <= node.threshold
        if go_left.all():
            node = node.left
        elif not go_left.any():
            node = node.right
        else:
            _route(node.left, X, rows[go_left], out)
            node, rows = node.right, rows[~go_left]
    out[rows] = node.value


def predict_tree(root: TreeNode, X, n_features: int):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != n_features:
        raise WidthMismatchError(f"tree expects {n_features} columns, got {X.shape}")
    out = np.empty(X.shape[0])
    if X.shape[0]:
        _route(root, X, np.arange(X.shape[0]), out)
    return out


def tree_depth(node: TreeNode) -> int:
    if isinstance(node, Leaf):
        return 0
    return 1 + max(tree_depth(node.left), tree_depth(node.right))


def leaves(node: TreeNode):
    if isinstance(node, Leaf):
        yield node
    else:
        yield from leaves(node.left)
        yield from leaves(node.right)
