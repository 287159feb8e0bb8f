"""Covariance kernels, localization profiles, and Gram assembly.

Covariance families
    rbf           K(x, x') = amplitude * exp(-||x - x'||^2 / (2 * lengthscale^2))
    exponential   K(x, x') = amplitude * exp(-||x - x'|| / lengthscale)
    polynomial    K(x, x') = amplitude * (offset + x . x')^degree

Localization profiles, evaluated at u = ||x - x0|| / h >= 0
    rectangular   1                       on u <= 1
    epanechnikov  ((d+2)/(2 V_d))(1-u^2)  on u <= 1   (V_d = unit-ball volume)
    gaussian      (1/(2 pi)) exp(-u^2)    everywhere
    hilbert       1/u                     on u <= 1   (infinite at u = 0)

The localization weight is k_h(x, x0) = (1/h) * profile(||x - x0|| / h); the
localized covariance multiplies K by the square roots of the two weights.
The Hilbert profile returns ``inf`` at distance zero; downstream code treats
that as a noise-free observation (sigma^2 / weight -> 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from lsgpr import backend

FAMILIES = ("rbf", "exponential", "polynomial")
PROFILES = ("rectangular", "epanechnikov", "gaussian", "hilbert")

_FAMILY_CODES = {
    "rbf": backend.FAMILY_RBF,
    "exponential": backend.FAMILY_EXPONENTIAL,
    "polynomial": backend.FAMILY_POLYNOMIAL,
}
_PROFILE_CODES = {
    "rectangular": backend.PROFILE_RECTANGULAR,
    "epanechnikov": backend.PROFILE_EPANECHNIKOV,
    "gaussian": backend.PROFILE_GAUSSIAN,
    "hilbert": backend.PROFILE_HILBERT,
}


@dataclass(frozen=True)
class CovKernelParams:
    """Covariance kernel family and hyperparameters.

    ``degree`` and ``offset`` are only meaningful for the polynomial family;
    ``lengthscale`` is ignored by it.
    """

    family: str
    lengthscale: float = 1.0
    amplitude: float = 1.0
    degree: int = 2
    offset: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        if not self.lengthscale > 0:
            raise ValueError(f"lengthscale must be positive, got {self.lengthscale}")
        if not self.amplitude > 0:
            raise ValueError(f"amplitude must be positive, got {self.amplitude}")
        if self.family == "polynomial":
            if int(self.degree) != self.degree or self.degree < 1:
                raise ValueError(f"degree must be a positive integer, got {self.degree}")
            if self.offset < 0:
                raise ValueError(f"offset must be non-negative, got {self.offset}")

    @property
    def code(self) -> int:
        return _FAMILY_CODES[self.family]


def unit_ball_volume(d: int) -> float:
    """Volume of the Euclidean unit ball in d dimensions."""
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


@dataclass(frozen=True)
class LocalKernelSpec:
    """Localization profile and the input dimension it operates in."""

    profile: str
    dimension: int = 1

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise ValueError(f"unknown localization profile {self.profile!r}")
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dimension}")

    @property
    def code(self) -> int:
        return _PROFILE_CODES[self.profile]

    @property
    def epanechnikov_const(self) -> float:
        """(d+2) / (2 V_d); equals 3/4 in one dimension."""
        d = self.dimension
        return (d + 2.0) / (2.0 * unit_ball_volume(d))

    @property
    def compact_support(self) -> bool:
        return self.profile != "gaussian"


def cov_eval(params: CovKernelParams, x, y) -> float:
    """Covariance K(x, y) between two points (scalar reference path)."""
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    if params.family == "rbf":
        r2 = float(np.dot(x - y, x - y))
        return params.amplitude * math.exp(-r2 / (2.0 * params.lengthscale**2))
    if params.family == "exponential":
        r = math.sqrt(float(np.dot(x - y, x - y)))
        return params.amplitude * math.exp(-r / params.lengthscale)
    return params.amplitude * (params.offset + float(np.dot(x, y))) ** params.degree


def profile_eval(spec: LocalKernelSpec, u: float) -> float:
    """Profile value k(u) at a non-negative scaled distance u."""
    if u < 0:
        raise ValueError(f"scaled distance must be non-negative, got {u}")
    if spec.profile == "rectangular":
        return 1.0 if u <= 1.0 else 0.0
    if spec.profile == "epanechnikov":
        return spec.epanechnikov_const * (1.0 - u * u) if u <= 1.0 else 0.0
    if spec.profile == "gaussian":
        return math.exp(-u * u) / (2.0 * math.pi)
    if u > 1.0:
        return 0.0
    return math.inf if u == 0.0 else 1.0 / u


def local_weight(spec: LocalKernelSpec, x, x0, h: float) -> float:
    """Localization weight k_h(x, x0) = (1/h) * k(||x - x0|| / h)."""
    if not h > 0:
        raise ValueError(f"bandwidth must be positive, got {h}")
    x = np.asarray(x, dtype=float).ravel()
    x0 = np.asarray(x0, dtype=float).ravel()
    r = float(np.linalg.norm(x - x0))
    return profile_eval(spec, r / h) / h


def localized_cov(params: CovKernelParams, spec: LocalKernelSpec, h: float,
                  x0, x, y) -> float:
    """Localized covariance sqrt(k_h(x,x0)) * K(x,y) * sqrt(k_h(y,x0)).

    Exactly zero when either point falls outside a compact support,
    regardless of the other point's weight.
    """
    wx = local_weight(spec, x, x0, h)
    wy = local_weight(spec, y, x0, h)
    if wx == 0.0 or wy == 0.0:
        return 0.0
    return math.sqrt(wx) * cov_eval(params, x, y) * math.sqrt(wy)


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise ValueError(f"expected a 2-d input matrix, got shape {X.shape}")
    return X


def gram(params: CovKernelParams, X, Y=None) -> np.ndarray:
    """Gram matrix with entries K(X_i, Y_j); exactly symmetric when Y is None."""
    X = _as_matrix(X)
    if Y is None:
        return backend.gram_sym(X, params.code, params.lengthscale,
                                params.amplitude, params.degree, params.offset)
    Y = _as_matrix(Y)
    if X.shape[1] != Y.shape[1]:
        raise ValueError(f"dimension mismatch: {X.shape[1]} vs {Y.shape[1]}")
    return backend.gram(X, Y, params.code, params.lengthscale,
                        params.amplitude, params.degree, params.offset)


def cov_vector(params: CovKernelParams, X, x0) -> np.ndarray:
    """Covariances K(X_i, x0) between rows of X and a single point."""
    X = _as_matrix(X)
    x0 = np.asarray(x0, dtype=float).ravel()
    if X.shape[1] != x0.shape[0]:
        raise ValueError(f"dimension mismatch: {X.shape[1]} vs {x0.shape[0]}")
    return backend.cov_vector(X, x0, params.code, params.lengthscale,
                              params.amplitude, params.degree, params.offset)


def local_weight_vector(spec: LocalKernelSpec, X, x0, h: float) -> np.ndarray:
    """Vector of localization weights k_h(X_i, x0)."""
    if not h > 0:
        raise ValueError(f"bandwidth must be positive, got {h}")
    X = _as_matrix(X)
    x0 = np.asarray(x0, dtype=float).ravel()
    if X.shape[1] != x0.shape[0]:
        raise ValueError(f"dimension mismatch: {X.shape[1]} vs {x0.shape[0]}")
    return backend.local_weights(X, x0, h, spec.code, spec.epanechnikov_const)


def localized_gram(params: CovKernelParams, spec: LocalKernelSpec, h: float,
                   x0, X) -> np.ndarray:
    """Localized Gram matrix D K D with D = diag(sqrt(k_h(X_i, x0))).

    Requires finite weights (no Hilbert profile with a grid point at x0).
    """
    X = _as_matrix(X)
    w = local_weight_vector(spec, X, x0, h)
    if not np.all(np.isfinite(w)):
        raise ValueError("localized_gram requires finite weights")
    sw = np.sqrt(w)
    return sw[:, None] * gram(params, X) * sw[None, :]
