"""Classical local regressors: KNN, Nadaraya-Watson, and weighted kernel
ridge regression over the positive-weight neighborhood."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from lsgpr import kernels, linalg
from lsgpr.exceptions import SingularMatrixError
from lsgpr.kernels import CovKernelParams, LocalKernelSpec
from lsgpr.local_gp import noise_diagonal, select_neighbors


@dataclass(frozen=True)
class KnnConfig:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


@dataclass(frozen=True)
class NadarayaWatsonResult:
    """Weighted-average prediction; no_support marks a zero denominator."""

    value: float
    no_support: bool


def knn_predict(X, y, k: int, x0) -> float:
    """Mean target of the k nearest training inputs (Euclidean distance).

    Ties at the k-th distance are broken by lowest index.
    """
    X = kernels._as_matrix(X)
    y = np.asarray(y, dtype=float).ravel()
    if not 1 <= k <= X.shape[0]:
        raise ValueError(f"need 1 <= k <= {X.shape[0]}, got k={k}")
    x0 = np.asarray(x0, dtype=float).ravel()
    d2 = kernels.backend.sq_dists(X, x0)
    order = np.argsort(d2, kind="stable")
    return float(np.mean(y[order[:k]]))


def nadaraya_watson(X, y, spec: LocalKernelSpec, h: float,
                    x0) -> NadarayaWatsonResult:
    """Locally weighted average: sum(w_i y_i) / sum(w_i).

    A zero denominator (no point in support) returns value 0 with the
    no_support flag.  Infinite weights (Hilbert at distance zero)
    dominate in the limit, so the result is the mean target over the
    coincident points.
    """
    if not h > 0:
        raise ValueError(f"bandwidth must be positive, got {h}")
    X = kernels._as_matrix(X)
    y = np.asarray(y, dtype=float).ravel()
    w = kernels.local_weight_vector(spec, X, x0, h)
    infinite = np.isinf(w)
    if infinite.any():
        return NadarayaWatsonResult(float(np.mean(y[infinite])), False)
    denom = float(np.sum(w))
    if denom == 0.0:
        return NadarayaWatsonResult(0.0, True)
    return NadarayaWatsonResult(float(np.sum(w * y) / denom), False)


def local_krr(X, y, params: CovKernelParams, noise: float,
              spec: LocalKernelSpec, h: float, x0) -> float:
    """Weighted kernel ridge regression prediction at x0.

    Solves (K_II + sigma^2 W^-1) alpha = y_I over the positive-weight
    neighbor set and returns K_{x0 I} alpha.  An empty neighborhood yields
    the empty representer sum, 0.
    """
    X = kernels._as_matrix(X)
    y = np.asarray(y, dtype=float).ravel()
    if not noise > 0:
        raise ValueError(f"ridge weight must be positive, got {noise}")
    x0 = np.asarray(x0, dtype=float).ravel()
    idx, weights = select_neighbors(X, x0, h, spec)
    if idx.size == 0:
        return 0.0
    A = kernels.gram(params, X[idx])
    A[np.diag_indices_from(A)] += noise_diagonal(weights, noise)
    try:
        factor = linalg.cholesky(A)
    except SingularMatrixError as err:
        raise SingularMatrixError(
            f"ridge system at query {x0.tolist()} is singular: {err}",
            jitters_tried=err.jitters_tried) from err
    alpha = linalg.solve_psd(factor, y[idx])
    k0 = kernels.cov_vector(params, X[idx], x0)
    return float(k0 @ alpha)
