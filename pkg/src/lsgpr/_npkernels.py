"""NumPy implementations of the hot array kernels.

Mirrors the signatures of the compiled module ``lsgpr._ckernels``; the
active implementation is chosen in :mod:`lsgpr.backend`.  Profile and
family codes are defined there as well.

Conventions (shared with the compiled core):

* covariance families: rbf ``a*exp(-r^2/(2*l^2))``, exponential
  ``a*exp(-r/l)``, polynomial ``a*(offset + x.y)^degree``;
* localization profiles evaluated at ``u = r/h`` and scaled by ``1/h``;
  the Hilbert profile returns ``inf`` at ``u == 0`` (caller handles).
"""

import numpy as np
from scipy.spatial.distance import cdist

FAMILY_RBF = 0
FAMILY_EXPONENTIAL = 1
FAMILY_POLYNOMIAL = 2

PROFILE_RECTANGULAR = 0
PROFILE_EPANECHNIKOV = 1
PROFILE_GAUSSIAN = 2
PROFILE_HILBERT = 3

_INV_TWO_PI = 1.0 / (2.0 * np.pi)


def sq_dists(X, x0):
    """Squared Euclidean distances from each row of X to the point x0."""
    diff = X - x0
    return np.einsum("ij,ij->i", diff, diff)


def local_weights(X, x0, h, profile, epan_const):
    """Localization weights k_h(x_i, x0) = (1/h) * k(||x_i - x0|| / h)."""
    u = np.sqrt(sq_dists(X, x0)) / h
    if profile == PROFILE_RECTANGULAR:
        w = (u <= 1.0).astype(float)
    elif profile == PROFILE_EPANECHNIKOV:
        w = np.where(u <= 1.0, epan_const * (1.0 - u * u), 0.0)
    elif profile == PROFILE_GAUSSIAN:
        w = _INV_TWO_PI * np.exp(-u * u)
    elif profile == PROFILE_HILBERT:
        with np.errstate(divide="ignore"):
            w = np.where(u <= 1.0, 1.0 / u, 0.0)
    else:
        raise ValueError(f"unknown profile code {profile}")
    return w / h


def cov_vector(X, x0, family, lengthscale, amplitude, degree, offset):
    """Covariances K(x_i, x0) against a single point."""
    if family == FAMILY_RBF:
        return amplitude * np.exp(-sq_dists(X, x0) / (2.0 * lengthscale**2))
    if family == FAMILY_EXPONENTIAL:
        return amplitude * np.exp(-np.sqrt(sq_dists(X, x0)) / lengthscale)
    if family == FAMILY_POLYNOMIAL:
        return amplitude * (offset + X @ x0) ** degree
    raise ValueError(f"unknown family code {family}")


def gram(X, Y, family, lengthscale, amplitude, degree, offset):
    """Cross-covariance matrix with entries K(X_i, Y_j)."""
    if family == FAMILY_RBF:
        r2 = cdist(X, Y, "sqeuclidean")
        return amplitude * np.exp(-r2 / (2.0 * lengthscale**2))
    if family == FAMILY_EXPONENTIAL:
        r = cdist(X, Y, "euclidean")
        return amplitude * np.exp(-r / lengthscale)
    if family == FAMILY_POLYNOMIAL:
        return amplitude * (offset + X @ Y.T) ** degree
    raise ValueError(f"unknown family code {family}")


def gram_sym(X, family, lengthscale, amplitude, degree, offset):
    """Gram matrix of X against itself, exactly symmetric by construction."""
    G = gram(X, X, family, lengthscale, amplitude, degree, offset)
    return np.triu(G) + np.triu(G, 1).T
