"""Exact Gaussian process regression.

Posterior mean/variance through a Cholesky factor of K_XX + sigma^2 I,
marginal log-likelihood, its analytic gradient in log-parameter space,
and L-BFGS hyperparameter optimization with deterministic restarts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.optimize
from scipy.spatial.distance import cdist, pdist

from lsgpr import kernels, linalg
from lsgpr.exceptions import NumericalError
from lsgpr.kernels import CovKernelParams

LOG_2PI = math.log(2.0 * math.pi)

# Predictive variances in [-VARIANCE_TOL, 0) clamp to zero; anything lower
# indicates a numerical problem and raises.
VARIANCE_TOL = 1e-10


@dataclass(frozen=True)
class PredictiveDistribution:
    """Posterior mean and variance at one query point.

    ``neighbor_count`` is the number of training points that informed the
    prediction (n for global models, |I| for localized ones).  A count of
    zero marks the empty-neighborhood prior fallback.  ``error`` is set
    only by batch prediction when a query failed.
    """

    mean: float
    variance: float
    neighbor_count: int
    error: str | None = None

    @property
    def empty_neighborhood(self) -> bool:
        return self.neighbor_count == 0 and self.error is None

    def interval95(self) -> tuple[float, float]:
        half = 1.96 * math.sqrt(self.variance)
        return self.mean - half, self.mean + half


def clamp_variance(value: float) -> float:
    """Clamp tiny negative variances to zero; raise below the tolerance."""
    if value < -VARIANCE_TOL:
        raise NumericalError(f"predictive variance {value} below -{VARIANCE_TOL}")
    return max(value, 0.0)


@dataclass(frozen=True)
class GPModel:
    """Fitted exact GP: training data, kernel, noise, factor, and alpha."""

    X: np.ndarray
    y: np.ndarray
    params: CovKernelParams
    noise: float
    factor: linalg.CholeskyFactor
    alpha: np.ndarray

    @property
    def n(self) -> int:
        return self.X.shape[0]


def fit(X, y, params: CovKernelParams, noise: float) -> GPModel:
    """Factor K_XX + noise * I and precompute alpha = (K_XX + noise I)^-1 y."""
    X = kernels._as_matrix(X)
    y = np.asarray(y, dtype=float).ravel()
    if X.shape[0] != y.shape[0]:
        raise ValueError(f"X has {X.shape[0]} rows but y has {y.shape[0]} entries")
    if X.shape[0] < 1:
        raise ValueError("need at least one training point")
    if not noise > 0:
        raise ValueError(f"noise variance must be positive, got {noise}")
    K = kernels.gram(params, X)
    K[np.diag_indices_from(K)] += noise
    factor = linalg.cholesky(K)
    alpha = linalg.solve_psd(factor, y)
    return GPModel(X=X, y=y, params=params, noise=noise, factor=factor, alpha=alpha)


def predict(model: GPModel, x0) -> PredictiveDistribution:
    """Posterior mean and variance at a single query point."""
    k0 = kernels.cov_vector(model.params, model.X, x0)
    mean = float(k0 @ model.alpha)
    v = linalg.solve_lower(model.factor, k0)
    prior = kernels.cov_eval(model.params, x0, x0)
    variance = clamp_variance(prior - float(v @ v))
    return PredictiveDistribution(mean=mean, variance=variance, neighbor_count=model.n)


def predict_batch(model: GPModel, queries) -> list[PredictiveDistribution]:
    """Vectorized posterior at several query points."""
    Q = kernels._as_matrix(queries)
    Kq = kernels.gram(model.params, model.X, Q)
    means = Kq.T @ model.alpha
    V = linalg.solve_lower(model.factor, Kq)
    priors = np.array([kernels.cov_eval(model.params, q, q) for q in Q])
    variances = priors - np.einsum("ij,ij->j", V, V)
    return [
        PredictiveDistribution(float(m), clamp_variance(float(s)), model.n)
        for m, s in zip(means, variances)
    ]


def log_marginal_likelihood(model: GPModel) -> float:
    """-1/2 y^T alpha - 1/2 log|K + noise I| - n/2 log(2 pi)."""
    fit_term = -0.5 * float(model.y @ model.alpha)
    return fit_term - 0.5 * linalg.log_det(model.factor) - 0.5 * model.n * LOG_2PI


def _scaled_distance_grad(params: CovKernelParams, X, K: np.ndarray) -> np.ndarray:
    """dK / d(log lengthscale) for the stationary families."""
    if params.family == "rbf":
        r2 = cdist(X, X, "sqeuclidean")
        return K * r2 / params.lengthscale**2
    if params.family == "exponential":
        r = cdist(X, X, "euclidean")
        return K * r / params.lengthscale
    raise ValueError(f"gradient not defined for the {params.family} family")


def mll_gradient(X, y, params: CovKernelParams, noise: float) -> np.ndarray:
    """Analytic MLL gradient over (log lengthscale, log amplitude, log noise).

    Uses d MLL / d theta = 1/2 alpha^T (dK/dtheta) alpha
    - 1/2 tr((K + noise I)^-1 dK/dtheta).
    """
    X = kernels._as_matrix(X)
    y = np.asarray(y, dtype=float).ravel()
    K = kernels.gram(params, X)
    Kn = K + noise * np.eye(X.shape[0])
    factor = linalg.cholesky(Kn)
    alpha = linalg.solve_psd(factor, y)
    Kinv = linalg.solve_psd(factor, np.eye(X.shape[0]))

    def direction(dK):
        return 0.5 * float(alpha @ dK @ alpha) - 0.5 * float(np.sum(Kinv * dK))

    d_ell = direction(_scaled_distance_grad(params, X, K))
    d_amp = direction(K)
    d_noise = 0.5 * noise * float(alpha @ alpha) - 0.5 * noise * float(np.trace(Kinv))
    return np.array([d_ell, d_amp, d_noise])


@dataclass(frozen=True)
class OptimizerConfig:
    """L-BFGS settings for hyperparameter optimization."""

    max_iter: int = 200
    grad_tol: float = 1e-5
    restart_scales: tuple[float, ...] = (0.1, 1.0, 10.0)


@dataclass(frozen=True)
class HyperOptResult:
    params: CovKernelParams
    noise: float
    log_marginal: float


def median_pairwise_distance(X, cap: int = 1500) -> float:
    """Median pairwise Euclidean distance (deterministic subsample above cap)."""
    X = kernels._as_matrix(X)
    if X.shape[0] > cap:
        idx = np.random.default_rng(0).choice(X.shape[0], cap, replace=False)
        X = X[idx]
    if X.shape[0] < 2:
        return 1.0
    med = float(np.median(pdist(X)))
    return med if med > 0 else 1.0


def _mll_at(X, y, params: CovKernelParams, noise: float) -> float:
    return log_marginal_likelihood(fit(X, y, params, noise))


def optimize_hypers(X, y, init: CovKernelParams, init_noise: float,
                    config: OptimizerConfig = OptimizerConfig()) -> HyperOptResult:
    """Maximize the MLL over (log lengthscale, log amplitude, log noise).

    Runs L-BFGS from the supplied init plus deterministic restarts whose
    lengthscales are ``restart_scales`` times the median pairwise distance;
    returns the best candidate, never worse than the init.
    """
    X = kernels._as_matrix(X)
    y = np.asarray(y, dtype=float).ravel()

    def unpack(theta):
        return replace(init, lengthscale=math.exp(theta[0]),
                       amplitude=math.exp(theta[1])), math.exp(theta[2])

    def objective(theta):
        # Keep line searches alive when a step lands on an unfactorable or
        # overflowing parameter set.
        if np.max(np.abs(theta)) > 50:
            return 1e25, np.zeros(3)
        params, noise = unpack(theta)
        try:
            value = _mll_at(X, y, params, noise)
            grad = mll_gradient(X, y, params, noise)
        except (linalg.SingularMatrixError, NumericalError):
            return 1e25, np.zeros(3)
        if not (np.isfinite(value) and np.all(np.isfinite(grad))):
            return 1e25, np.zeros(3)
        return -value, -grad

    theta_init = np.log([init.lengthscale, init.amplitude, init_noise])
    init_value = _mll_at(X, y, init, init_noise)
    if not np.isfinite(init_value):
        raise ValueError(f"marginal log-likelihood is not finite at init ({init_value})")
    if np.linalg.norm(mll_gradient(X, y, init, init_noise)) < config.grad_tol:
        return HyperOptResult(init, init_noise, init_value)

    med = median_pairwise_distance(X)
    starts = [theta_init] + [
        np.array([math.log(s * med), theta_init[1], theta_init[2]])
        for s in config.restart_scales
    ]
    best_theta, best_value = theta_init, init_value
    for theta0 in starts:
        res = scipy.optimize.minimize(
            objective, theta0, jac=True, method="L-BFGS-B",
            options={"maxiter": config.max_iter, "gtol": config.grad_tol})
        if np.isfinite(res.fun) and -res.fun > best_value:
            best_theta, best_value = res.x, -res.fun
    params, noise = unpack(best_theta)
    return HyperOptResult(params, noise, best_value)
