"""Ordinary least squares with a single intercept, solved by normal equations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from ..errors import SingularError, WidthMismatchError

# Gram matrices above this 2-norm condition number are treated as ill-conditioned.
MAX_CONDITION = 1e10


@dataclass(frozen=True)
class LinearModel:
    intercept: float
    coefficients: tuple
    ridge_eps: float = 0.0  # ridge actually applied during the solve

    @property
    def n_features(self):
        return len(self.coefficients)

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise WidthMismatchError(
                f"linear model expects {self.n_features} columns, got {X.shape}"
            )
        return self.intercept + X @ np.array(self.coefficients, dtype=float)


def _solve_spd(gram, rhs):
    factor = linalg.cho_factor(gram, lower=True, check_finite=False)
    return linalg.cho_solve(factor, rhs, check_finite=False)


def linear_fit(X, y, ridge_eps: float = 1e-8) -> LinearModel:
    """Least-squares fit of ``y ~ intercept + X @ coefficients``.

    The normal equations ``(A^T A) theta = A^T y`` on ``A = [1 | X]`` are
    solved by Cholesky.  When ``A^T A`` is singular or its condition number
    exceeds :data:`MAX_CONDITION`, ``ridge_eps`` is added to the diagonal
    entries of the feature block (the intercept is not penalized) and the
    solve is retried.  With ``ridge_eps == 0`` a rank-deficient system raises
    :class:`SingularError`.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("X must be a non-empty 2-D array")
    if y.shape != (X.shape[0],):
        raise ValueError(f"y has shape {y.shape}, expected ({X.shape[0]},)")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise ValueError("linear_fit requires finite, imputed inputs")
    if ridge_eps < 0:
        raise ValueError("ridge_eps must be >= 0")

    n, p = X.shape
    A = np.hstack([np.ones((n, 1)), X])
    gram = A.T @ A
    rhs = A.T @ y

    applied = 0.0
    theta = None
    if np.linalg.cond(gram) <= MAX_CONDITION:
        try:
            theta = _solve_spd(gram, rhs)
        except linalg.LinAlgError:
            theta = None
    if theta is None:
        if ridge_eps == 0.0:
            if np.linalg.matrix_rank(A) < p + 1:
                raise SingularError(
                    f"design matrix of shape {A.shape} is rank deficient and ridge_eps is 0"
                )
            theta = linalg.solve(gram, rhs, assume_a="sym")
        else:
            penalty = np.full(p + 1, ridge_eps)
            penalty[0] = 0.0
            try:
                theta = _solve_spd(gram + np.diag(penalty), rhs)
            except linalg.LinAlgError as exc:
                raise SingularError(
                    f"ridge_eps={ridge_eps} is too small for this design (features unscaled?)"
                ) from exc
            applied = float(ridge_eps)

    if not np.isfinite(theta).all():
        raise SingularError("normal equations produced non-finite coefficients")
    return LinearModel(float(theta[0]), tuple(float(t) for t in theta[1:]), applied)
