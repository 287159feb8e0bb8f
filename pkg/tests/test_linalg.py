"""Cholesky factorization, solves, log-determinant, and sampling."""

import math

import numpy as np
import pytest

from lsgpr import linalg
from lsgpr.exceptions import SingularMatrixError


def random_spd(rng, n):
    B = rng.normal(size=(n, n))
    return B @ B.T + np.eye(n)


def test_cholesky_diagonal_matrix():
    factor = linalg.cholesky(np.diag([4.0, 9.0]))
    assert np.allclose(factor.lower, np.diag([2.0, 3.0]))
    assert factor.jitter_used == 0.0


def test_cholesky_identity():
    factor = linalg.cholesky(np.eye(3))
    assert np.array_equal(factor.lower, np.eye(3))
    assert factor.n == 3


def test_cholesky_reconstruction():
    rng = np.random.default_rng(40)
    A = random_spd(rng, 10)
    factor = linalg.cholesky(A)
    assert factor.jitter_used == 0.0
    error = np.linalg.norm(factor.lower @ factor.lower.T - A)
    assert error < 1e-10 * np.linalg.norm(A)
    assert np.all(np.diag(factor.lower) > 0)


def test_cholesky_rejects_bad_input():
    with pytest.raises(ValueError, match="square"):
        linalg.cholesky(np.zeros((2, 3)))
    with pytest.raises(ValueError, match="symmetric"):
        linalg.cholesky(np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_cholesky_escalates_jitter_for_singular_psd():
    # Rank-one PSD matrix needs a positive jitter level.
    factor = linalg.cholesky(np.ones((3, 3)))
    assert factor.jitter_used > 0.0
    assert factor.jitter_used in tuple(j * 1.0 for j in linalg.JITTER_LADDER)


def test_cholesky_indefinite_raises_with_ladder():
    with pytest.raises(SingularMatrixError) as err:
        linalg.cholesky(np.diag([1.0, -1.0]))
    assert len(err.value.jitters_tried) == len(linalg.JITTER_LADDER)


def test_solve_psd_identity():
    b = np.array([3.0, -1.0, 2.0])
    assert np.array_equal(linalg.solve_psd(linalg.cholesky(np.eye(3)), b), b)


def test_solve_psd_diagonal():
    factor = linalg.cholesky(np.diag([4.0, 9.0]))
    assert np.allclose(linalg.solve_psd(factor, [8.0, 27.0]), [2.0, 3.0])


def test_solve_psd_residual():
    rng = np.random.default_rng(41)
    A = random_spd(rng, 15)
    b = rng.normal(size=15)
    x = linalg.solve_psd(linalg.cholesky(A), b)
    assert np.linalg.norm(A @ x - b) < 1e-10 * np.linalg.norm(b)


def test_solve_psd_matrix_rhs_and_mismatch():
    rng = np.random.default_rng(42)
    A = random_spd(rng, 6)
    factor = linalg.cholesky(A)
    X = linalg.solve_psd(factor, np.eye(6))
    assert np.allclose(A @ X, np.eye(6), atol=1e-10)
    with pytest.raises(ValueError, match="mismatch"):
        linalg.solve_psd(factor, np.zeros(5))


def test_solve_roundtrip_recovers_x():
    rng = np.random.default_rng(43)
    for n in (3, 17, 50):
        A = random_spd(rng, n)
        x = rng.normal(size=n)
        recovered = linalg.solve_psd(linalg.cholesky(A), A @ x)
        assert np.linalg.norm(recovered - x) < 1e-8 * np.linalg.norm(x)


def test_solve_lower_forward_substitution():
    rng = np.random.default_rng(44)
    A = random_spd(rng, 8)
    factor = linalg.cholesky(A)
    b = rng.normal(size=8)
    v = linalg.solve_lower(factor, b)
    assert np.allclose(factor.lower @ v, b, atol=1e-12)
    with pytest.raises(ValueError, match="mismatch"):
        linalg.solve_lower(factor, np.zeros(9))


def test_log_det_identity_and_diagonal():
    assert linalg.log_det(linalg.cholesky(np.eye(5))) == 0.0
    value = linalg.log_det(linalg.cholesky(np.diag([4.0, 9.0])))
    assert value == pytest.approx(math.log(36.0), rel=1e-14)


def test_log_det_matches_eigenvalue_oracle():
    rng = np.random.default_rng(45)
    for n in (4, 10, 20):
        A = random_spd(rng, n)
        expected = float(np.sum(np.log(np.linalg.eigvalsh(A))))
        assert linalg.log_det(linalg.cholesky(A)) == pytest.approx(
            expected, abs=1e-8)


def test_sample_gaussian_zero_covariance():
    draws = linalg.sample_gaussian(np.zeros((4, 4)), seed=0, count=3)
    assert draws.shape == (3, 4)
    assert np.max(np.abs(draws)) < 1e-3


def test_sample_gaussian_identity_moments():
    draws = linalg.sample_gaussian(np.eye(4), seed=1, count=10_000)
    assert np.all(np.abs(draws.mean(axis=0)) < 0.05)
    assert np.all(draws.var(axis=0) > 0.9)
    assert np.all(draws.var(axis=0) < 1.1)


def test_sample_gaussian_deterministic():
    cov = np.array([[2.0, 0.5], [0.5, 1.0]])
    a = linalg.sample_gaussian(cov, seed=7, count=5)
    b = linalg.sample_gaussian(cov, seed=7, count=5)
    assert np.array_equal(a, b)
    c = linalg.sample_gaussian(cov, seed=8, count=5)
    assert not np.array_equal(a, c)


def test_sample_gaussian_rejects_bad_count():
    with pytest.raises(ValueError, match="count"):
        linalg.sample_gaussian(np.eye(2), seed=0, count=0)
