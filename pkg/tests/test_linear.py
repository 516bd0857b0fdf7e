import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grossloss.errors import SingularError, WidthMismatchError
from grossloss.regressors import LinearModel, linear_fit
from grossloss.synthetic import make_affine


def test_three_points_hand_solution():
    # normal equations [[3, 3], [3, 5]] theta = [9, 13] -> theta = (1, 2)
    m = linear_fit([[0.0], [1.0], [2.0]], [1.0, 3.0, 5.0], ridge_eps=0.0)
    assert m.intercept == pytest.approx(1.0, abs=1e-12)
    assert m.coefficients == pytest.approx((2.0,), abs=1e-12)


def test_constant_target():
    X = np.random.default_rng(0).normal(size=(12, 3))
    m = linear_fit(X, np.full(12, 4.0))
    assert m.intercept == pytest.approx(4.0, abs=1e-12)
    assert np.allclose(m.coefficients, 0.0, atol=1e-12)


def test_duplicated_column_matches_pseudo_inverse():
    rng = np.random.default_rng(1)
    base = rng.normal(size=(15, 2))
    X = np.column_stack([base, base[:, 0]])
    y = 1.5 + base @ [2.0, -1.0] + rng.normal(0, 0.1, 15)
    m = linear_fit(X, y, ridge_eps=1e-8)
    assert m.ridge_eps == 1e-8
    assert np.isfinite(m.coefficients).all()
    A = np.column_stack([np.ones(15), X])
    oracle = A @ (np.linalg.pinv(A) @ y)
    assert np.max(np.abs(m.predict(X) - oracle)) < 1e-6


def test_rank_deficient_without_ridge():
    X = np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]])
    with pytest.raises(SingularError):
        linear_fit(X, [1.0, 2.0, 3.0], ridge_eps=0.0)


def test_underdetermined_uses_ridge():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(5, 12))
    y = rng.normal(size=5)
    m = linear_fit(X, y)
    assert m.ridge_eps > 0
    assert np.max(np.abs(m.predict(X) - y)) < 1e-5


def test_predict_and_width_check():
    m = LinearModel(1.0, (2.0,))
    assert m.predict([[3.0]]).tolist() == [7.0]
    with pytest.raises(WidthMismatchError):
        m.predict(np.zeros((1, 2)))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(8, 60), p=st.integers(1, 6))
def test_residual_orthogonality(seed, n, p):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, p))
    y = rng.normal(size=n) * 3 + 1
    m = linear_fit(X, y, ridge_eps=0.0)
    r = y - m.predict(X)
    assert abs(r.sum()) < 1e-8
    assert np.all(np.abs(X.T @ r) < 1e-8)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), j=st.integers(0, 4))
def test_affine_equivariance(seed, j):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(30, 5))
    y = rng.normal(size=30)
    Xq = rng.normal(size=(10, 5))
    base = linear_fit(X, y, ridge_eps=0.0).predict(Xq)
    X2, Xq2 = X.copy(), Xq.copy()
    X2[:, j] *= 10
    Xq2[:, j] *= 10
    scaled = linear_fit(X2, y, ridge_eps=0.0).predict(Xq2)
    assert np.all(np.abs(scaled - base) <= 1e-8 * np.maximum(1.0, np.abs(base)))


@pytest.mark.parametrize("seed", range(5))
def test_noiseless_recovery(seed):
    X, y, b, w = make_affine(100, 7, seed)
    m = linear_fit(X, y, ridge_eps=0.0)
    assert np.mean(np.abs(m.predict(X) - y)) < 1e-6
    assert m.intercept == pytest.approx(b, abs=1e-9)
    assert np.allclose(m.coefficients, w, atol=1e-9)
