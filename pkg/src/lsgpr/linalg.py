"""Cholesky factorization with jitter escalation, solves, and Gaussian sampling.

Sampling uses NumPy's PCG64 generator (seeded, platform-independent) with
its documented ``standard_normal`` transform, so draws are reproducible
across runs for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from lsgpr.exceptions import SingularMatrixError

# Relative jitter ladder; each value multiplies the mean diagonal of the input.
JITTER_LADDER = (0.0, 1e-10, 1e-8, 1e-6)

_SYMMETRY_RTOL = 1e-12


@dataclass(frozen=True)
class CholeskyFactor:
    """Lower-triangular factor L with L L^T = A + jitter_used * I."""

    lower: np.ndarray
    jitter_used: float

    @property
    def n(self) -> int:
        return self.lower.shape[0]


def cholesky(A) -> CholeskyFactor:
    """Factor a symmetric PSD matrix, escalating jitter until it succeeds."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
    if float(np.max(np.abs(A - A.T), initial=0.0)) > _SYMMETRY_RTOL * scale:
        raise ValueError("matrix is not symmetric within tolerance")

    diag_mean = float(np.mean(np.diag(A))) if A.size else 0.0
    jitter_scale = diag_mean if diag_mean > 0 else 1.0
    tried = []
    for level in JITTER_LADDER:
        jitter = level * jitter_scale
        tried.append(jitter)
        try:
            M = A if jitter == 0.0 else A + jitter * np.eye(A.shape[0])
            L = scipy.linalg.cholesky(M, lower=True, check_finite=False)
        except scipy.linalg.LinAlgError:
            continue
        return CholeskyFactor(lower=L, jitter_used=jitter)
    raise SingularMatrixError(
        f"Cholesky failed for {A.shape[0]}x{A.shape[0]} matrix "
        f"after jitter ladder {tried}", jitters_tried=tried)


def solve_psd(factor: CholeskyFactor, b) -> np.ndarray:
    """Solve (L L^T) x = b by forward and back substitution."""
    b = np.asarray(b, dtype=float)
    if b.shape[0] != factor.n:
        raise ValueError(f"dimension mismatch: factor is {factor.n}, b has {b.shape[0]} rows")
    return scipy.linalg.cho_solve((factor.lower, True), b, check_finite=False)


def solve_lower(factor: CholeskyFactor, b) -> np.ndarray:
    """Solve L x = b (forward substitution only)."""
    b = np.asarray(b, dtype=float)
    if b.shape[0] != factor.n:
        raise ValueError(f"dimension mismatch: factor is {factor.n}, b has {b.shape[0]} rows")
    return scipy.linalg.solve_triangular(factor.lower, b, lower=True, check_finite=False)


def log_det(factor: CholeskyFactor) -> float:
    """log det of the factored matrix: 2 * sum(log diag(L))."""
    return 2.0 * float(np.sum(np.log(np.diag(factor.lower))))


def sample_gaussian(cov, seed: int, count: int) -> np.ndarray:
    """Draw ``count`` zero-mean Gaussian vectors with the given covariance.

    Returns an array of shape (count, n); identical seeds give bitwise
    identical draws.
    """
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    factor = cholesky(cov)
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((count, factor.n))
    return z @ factor.lower.T
