"""Agreement between the compiled and NumPy array-kernel backends."""

import math
import os
import subprocess
import sys

import numpy as np
import pytest

from lsgpr import _npkernels, backend

FAMILY_ARGS = [
    (backend.FAMILY_RBF, 0.7, 1.2, 2, 1.0),
    (backend.FAMILY_EXPONENTIAL, 1.3, 0.8, 2, 1.0),
    (backend.FAMILY_POLYNOMIAL, 1.0, 0.9, 3, 0.4),
]

PROFILE_CODES = [
    backend.PROFILE_RECTANGULAR,
    backend.PROFILE_EPANECHNIKOV,
    backend.PROFILE_GAUSSIAN,
    backend.PROFILE_HILBERT,
]


def _cython_or_skip():
    impls = backend.implementations()
    if "cython" not in impls:
        pytest.skip("compiled extension not built")
    return impls["cython"]


def _readonly(array):
    array = np.ascontiguousarray(array, dtype=float)
    array.flags.writeable = False
    return array


def test_backend_name_is_known():
    assert backend.name in ("numpy", "cython")
    assert "numpy" in backend.implementations()


def test_sq_dists_agrees():
    ext = _cython_or_skip()
    rng = np.random.default_rng(30)
    for _ in range(10):
        X = _readonly(rng.normal(size=(rng.integers(1, 40), rng.integers(1, 5))))
        x0 = _readonly(rng.normal(size=X.shape[1])).ravel()
        a = _npkernels.sq_dists(X, x0)
        b = np.asarray(ext.sq_dists(X, x0))
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


def test_local_weights_agree_including_sentinels():
    ext = _cython_or_skip()
    rng = np.random.default_rng(31)
    epan_const = 0.75
    for profile in PROFILE_CODES:
        for _ in range(5):
            X = rng.uniform(-1, 1, size=(20, 1))
            X[3, 0] = 0.125  # exact coincidence with x0
            X = _readonly(X)
            x0 = np.array([0.125])
            h = float(rng.uniform(0.3, 1.5))
            a = _npkernels.local_weights(X, x0, h, profile, epan_const)
            b = np.asarray(ext.local_weights(X, x0, h, profile, epan_const))
            finite = np.isfinite(a)
            assert np.array_equal(finite, np.isfinite(b))
            assert np.allclose(a[finite], b[finite], rtol=1e-12, atol=1e-15)
            if profile == backend.PROFILE_HILBERT:
                assert b[3] == math.inf


def test_support_boundary_agrees():
    # A point at scaled distance exactly 1 must be treated identically.
    ext = _cython_or_skip()
    X = _readonly(np.array([[1.0], [1.0 + 1e-12]]))
    x0 = np.array([0.0])
    for profile in PROFILE_CODES:
        a = _npkernels.local_weights(X, x0, 1.0, profile, 0.75)
        b = np.asarray(ext.local_weights(X, x0, 1.0, profile, 0.75))
        assert np.array_equal(a, b)


def test_cov_vector_agrees():
    ext = _cython_or_skip()
    rng = np.random.default_rng(32)
    for family, ell, amp, degree, offset in FAMILY_ARGS:
        X = _readonly(rng.normal(size=(25, 3)))
        x0 = rng.normal(size=3)
        a = _npkernels.cov_vector(X, x0, family, ell, amp, degree, offset)
        b = np.asarray(ext.cov_vector(X, x0, family, ell, amp, degree, offset))
        assert np.allclose(a, b, rtol=1e-12, atol=1e-15)


def test_gram_agrees():
    ext = _cython_or_skip()
    rng = np.random.default_rng(33)
    for family, ell, amp, degree, offset in FAMILY_ARGS:
        X = _readonly(rng.normal(size=(12, 2)))
        Y = _readonly(rng.normal(size=(9, 2)))
        a = _npkernels.gram(X, Y, family, ell, amp, degree, offset)
        b = np.asarray(ext.gram(X, Y, family, ell, amp, degree, offset))
        assert np.allclose(a, b, rtol=1e-12, atol=1e-15)


def test_gram_sym_agrees_and_is_exactly_symmetric():
    ext = _cython_or_skip()
    rng = np.random.default_rng(34)
    for family, ell, amp, degree, offset in FAMILY_ARGS:
        X = _readonly(rng.normal(size=(15, 3)))
        a = _npkernels.gram_sym(X, family, ell, amp, degree, offset)
        b = np.asarray(ext.gram_sym(X, family, ell, amp, degree, offset))
        assert np.allclose(a, b, rtol=1e-12, atol=1e-15)
        assert np.array_equal(a, a.T)
        assert np.array_equal(b, b.T)


def test_env_var_forces_numpy_backend():
    env = dict(os.environ, LSGPR_NO_EXT="1")
    out = subprocess.run(
        [sys.executable, "-c", "from lsgpr import backend; print(backend.name)"],
        capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "numpy"
