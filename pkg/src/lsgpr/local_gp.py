"""Localized GP posterior.

Neighbor selection under a localization kernel, bandwidth adaptation,
the localized predictive distribution computed through a Cholesky factor
of K_II + sigma^2 W^-1, the local marginal log-likelihood, and the
equivalent heteroscedastic-noise formulation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from lsgpr import kernels, linalg
from lsgpr.exceptions import SingularMatrixError
from lsgpr.global_gp import LOG_2PI, PredictiveDistribution, clamp_variance
from lsgpr.kernels import CovKernelParams, LocalKernelSpec

# Inflation applied to the m-th neighbor distance so boundary-vanishing
# profiles still give that neighbor strictly positive weight.
BANDWIDTH_INFLATION = 1e-6


@dataclass(frozen=True)
class BandwidthPolicy:
    """How to pick the bandwidth at each query: fixed h or m-th-neighbor."""

    mode: str
    h: float = 0.0
    m: int = 0

    def __post_init__(self):
        if self.mode == "fixed_h":
            if not self.h > 0:
                raise ValueError(f"fixed bandwidth must be positive, got {self.h}")
        elif self.mode == "min_neighbors":
            if self.m < 1:
                raise ValueError(f"neighbor count must be >= 1, got {self.m}")
        else:
            raise ValueError(f"unknown bandwidth mode {self.mode!r}")

    @classmethod
    def fixed(cls, h: float) -> "BandwidthPolicy":
        return cls(mode="fixed_h", h=h)

    @classmethod
    def min_neighbors(cls, m: int) -> "BandwidthPolicy":
        return cls(mode="min_neighbors", m=m)


@dataclass(frozen=True)
class LocalModel:
    """Per-query localized model: neighborhood, weights, and solve state."""

    x0: np.ndarray
    h: float
    indices: np.ndarray
    weights: np.ndarray
    factor: linalg.CholeskyFactor
    alpha: np.ndarray

    @property
    def neighbor_count(self) -> int:
        return int(self.indices.size)


def select_neighbors(X, x0, h: float, spec: LocalKernelSpec):
    """Indices with strictly positive localization weight, and those weights.

    Infinite weights (Hilbert profile at distance zero) pass through as-is.
    """
    if not h > 0:
        raise ValueError(f"bandwidth must be positive, got {h}")
    X = kernels._as_matrix(X)
    w = kernels.local_weight_vector(spec, X, x0, h)
    idx = np.flatnonzero(w > 0)
    return idx, w[idx]


def adapt_bandwidth(X, x0, m: int, spec: LocalKernelSpec) -> float:
    """Bandwidth that captures at least the m nearest training points.

    Returns the m-th smallest distance inflated by 1 + 1e-6 so the m-th
    point keeps positive weight even under profiles that vanish at the
    support boundary.  Ties at that distance are all admitted.
    """
    X = kernels._as_matrix(X)
    n = X.shape[0]
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= {n}, got m={m}")
    x0 = np.asarray(x0, dtype=float).ravel()
    dists = np.sqrt(kernels.backend.sq_dists(X, x0))
    d_m = float(np.partition(dists, m - 1)[m - 1])
    if d_m > 0:
        return d_m * (1.0 + BANDWIDTH_INFLATION)
    positive = dists[dists > 0]
    if positive.size:
        return float(positive.min())
    # Every training point coincides with x0; any positive h selects them all.
    spread = float(np.max(X, axis=0).max() - np.min(X, axis=0).min()) if n else 0.0
    return BANDWIDTH_INFLATION * spread if spread > 0 else BANDWIDTH_INFLATION


def _resolve_bandwidth(X, x0, policy: BandwidthPolicy, spec: LocalKernelSpec) -> float:
    if policy.mode == "fixed_h":
        return policy.h
    return adapt_bandwidth(X, x0, policy.m, spec)


def noise_diagonal(weights: np.ndarray, noise: float) -> np.ndarray:
    """Per-neighbor noise sigma^2 / w_i; infinite weight means noise-free."""
    return np.where(np.isinf(weights), 0.0, noise / weights)


def build_local_model(X, y, params: CovKernelParams, noise: float,
                      spec: LocalKernelSpec, policy: BandwidthPolicy,
                      x0) -> LocalModel | None:
    """Select the neighborhood at x0 and factor K_II + sigma^2 W^-1.

    Returns None when no training point has positive weight.
    """
    if not noise > 0:
        raise ValueError(f"noise variance must be positive, got {noise}")
    X = kernels._as_matrix(X)
    y = np.asarray(y, dtype=float).ravel()
    x0 = np.asarray(x0, dtype=float).ravel()
    h = _resolve_bandwidth(X, x0, policy, spec)
    idx, weights = select_neighbors(X, x0, h, spec)
    if idx.size == 0:
        return None
    M = kernels.gram(params, X[idx])
    M[np.diag_indices_from(M)] += noise_diagonal(weights, noise)
    try:
        factor = linalg.cholesky(M)
    except SingularMatrixError as err:
        raise SingularMatrixError(
            f"localized system at query {x0.tolist()} is singular: {err}",
            jitters_tried=err.jitters_tried) from err
    alpha = linalg.solve_psd(factor, y[idx])
    return LocalModel(x0=x0, h=h, indices=idx, weights=weights,
                      factor=factor, alpha=alpha)


def _prior_fallback(params: CovKernelParams, x0) -> PredictiveDistribution:
    return PredictiveDistribution(
        mean=0.0, variance=kernels.cov_eval(params, x0, x0), neighbor_count=0)


def local_predict(X, y, params: CovKernelParams, noise: float,
                  spec: LocalKernelSpec, policy: BandwidthPolicy,
                  x0) -> PredictiveDistribution:
    """Localized posterior mean and variance at x0.

    mean = K_{x0 I} (K_II + sigma^2 W^-1)^-1 y_I and
    variance = K(x0,x0) - K_{x0 I} (K_II + sigma^2 W^-1)^-1 K_{I x0},
    both evaluated through the Cholesky factor.  An empty neighborhood
    falls back to the prior with neighbor_count 0.
    """
    model = build_local_model(X, y, params, noise, spec, policy, x0)
    if model is None:
        return _prior_fallback(params, x0)
    X = kernels._as_matrix(X)
    k0 = kernels.cov_vector(params, X[model.indices], model.x0)
    mean = float(k0 @ model.alpha)
    v = linalg.solve_lower(model.factor, k0)
    prior = kernels.cov_eval(params, model.x0, model.x0)
    variance = clamp_variance(prior - float(v @ v))
    return PredictiveDistribution(mean=mean, variance=variance,
                                  neighbor_count=model.neighbor_count)


def local_predict_batch(X, y, params: CovKernelParams, noise: float,
                        spec: LocalKernelSpec, policy: BandwidthPolicy,
                        queries) -> list[PredictiveDistribution]:
    """Independent local_predict per query; per-query failures are recorded
    on the result rather than aborting the batch."""
    Q = kernels._as_matrix(queries)
    out = []
    for q in Q:
        try:
            out.append(local_predict(X, y, params, noise, spec, policy, q))
        except (SingularMatrixError, ValueError) as err:
            out.append(PredictiveDistribution(
                mean=float("nan"), variance=float("nan"),
                neighbor_count=0, error=str(err)))
    return out


def local_mll(X_I, y_I, weights, params: CovKernelParams, noise: float) -> float:
    """Local marginal log-likelihood of y_I under the localized model.

    -1/2 y^T M^-1 y - 1/2 log|M| - |I|/2 log(2 pi) with
    M = K_II + sigma^2 W^-1.
    """
    X_I = kernels._as_matrix(X_I)
    y_I = np.asarray(y_I, dtype=float).ravel()
    weights = np.asarray(weights, dtype=float).ravel()
    M = kernels.gram(params, X_I)
    M[np.diag_indices_from(M)] += noise_diagonal(weights, noise)
    factor = linalg.cholesky(M)
    quad = float(y_I @ linalg.solve_psd(factor, y_I))
    return -0.5 * quad - 0.5 * linalg.log_det(factor) - 0.5 * y_I.size * LOG_2PI


def hetero_predict(X, y, params: CovKernelParams, noise: float,
                   spec: LocalKernelSpec, h: float, x0) -> PredictiveDistribution:
    """Posterior under the heteroscedastic reading of localization.

    Observations carry per-point noise sigma^2 / k_h(x_i, x0) on an
    unlocalized GP over the neighborhood; algebraically identical to
    local_predict with a fixed bandwidth.
    """
    X = kernels._as_matrix(X)
    y = np.asarray(y, dtype=float).ravel()
    x0 = np.asarray(x0, dtype=float).ravel()
    if not noise > 0:
        raise ValueError(f"noise variance must be positive, got {noise}")
    idx, weights = select_neighbors(X, x0, h, spec)
    if idx.size == 0:
        return _prior_fallback(params, x0)
    M = kernels.gram(params, X[idx])
    M[np.diag_indices_from(M)] += noise_diagonal(weights, noise)
    try:
        factor = linalg.cholesky(M)
    except SingularMatrixError as err:
        raise SingularMatrixError(
            f"heteroscedastic system at query {x0.tolist()} is singular: {err}",
            jitters_tried=err.jitters_tried) from err
    k0 = kernels.cov_vector(params, X[idx], x0)
    mean = float(k0 @ linalg.solve_psd(factor, y[idx]))
    prior = kernels.cov_eval(params, x0, x0)
    variance = clamp_variance(prior - float(k0 @ linalg.solve_psd(factor, k0)))
    return PredictiveDistribution(mean=mean, variance=variance,
                                  neighbor_count=int(idx.size))
