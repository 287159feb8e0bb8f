"""Covariance kernels, localization profiles, and Gram assembly."""

import math

import numpy as np
import pytest

from lsgpr import kernels
from lsgpr.kernels import CovKernelParams, LocalKernelSpec

import oracles

FAMILY_KWARGS = {
    "rbf": dict(lengthscale=0.8, amplitude=1.3),
    "exponential": dict(lengthscale=1.7, amplitude=0.6),
    "polynomial": dict(amplitude=0.9, degree=3, offset=0.5),
}


def random_params(rng, family):
    if family == "polynomial":
        return CovKernelParams(family, amplitude=float(rng.uniform(0.5, 2)),
                               degree=int(rng.integers(1, 4)),
                               offset=float(rng.uniform(0.1, 2)))
    return CovKernelParams(family, lengthscale=float(rng.uniform(0.3, 2)),
                           amplitude=float(rng.uniform(0.5, 2)))


# ---------------------------------------------------------------------------
# CovKernelParams / LocalKernelSpec validation


def test_unknown_family_rejected():
    with pytest.raises(ValueError, match="family"):
        CovKernelParams("matern")


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_nonpositive_lengthscale_rejected(bad):
    with pytest.raises(ValueError, match="lengthscale"):
        CovKernelParams("rbf", lengthscale=bad)


def test_nonpositive_amplitude_rejected():
    with pytest.raises(ValueError, match="amplitude"):
        CovKernelParams("rbf", amplitude=0.0)


def test_polynomial_degree_and_offset_validated():
    with pytest.raises(ValueError, match="degree"):
        CovKernelParams("polynomial", degree=0)
    with pytest.raises(ValueError, match="offset"):
        CovKernelParams("polynomial", offset=-0.1)
    CovKernelParams("polynomial", degree=1, offset=0.0)  # boundary is legal


def test_unknown_profile_rejected():
    with pytest.raises(ValueError, match="profile"):
        LocalKernelSpec("triangular")
    with pytest.raises(ValueError, match="dimension"):
        LocalKernelSpec("rectangular", dimension=0)


# ---------------------------------------------------------------------------
# cov_eval


def test_cov_eval_rbf_zero_distance():
    params = CovKernelParams("rbf")
    assert kernels.cov_eval(params, [0.3, -0.1], [0.3, -0.1]) == 1.0


def test_cov_eval_rbf_sqrt_two_distance():
    # ||x - x'|| = sqrt(2) with unit lengthscale gives exp(-1).
    params = CovKernelParams("rbf")
    value = kernels.cov_eval(params, [1.0, 0.0], [0.0, 1.0])
    assert value == pytest.approx(math.exp(-1.0), rel=1e-12)


def test_cov_eval_exponential():
    params = CovKernelParams("exponential", lengthscale=2.0)
    value = kernels.cov_eval(params, [0.0], [2.0])
    assert value == pytest.approx(math.exp(-1.0), rel=1e-12)


def test_cov_eval_polynomial_orthogonal_inputs():
    params = CovKernelParams("polynomial", degree=4, offset=1.0)
    assert kernels.cov_eval(params, [1.0, 0.0], [0.0, 1.0]) == 1.0


def test_cov_eval_symmetry_all_families():
    rng = np.random.default_rng(11)
    for family in kernels.FAMILIES:
        params = random_params(rng, family)
        for _ in range(10):
            x, y = rng.normal(size=(2, 3))
            assert kernels.cov_eval(params, x, y) == kernels.cov_eval(params, y, x)


def test_cov_eval_matches_scalar_oracle():
    rng = np.random.default_rng(12)
    for family, kw in FAMILY_KWARGS.items():
        params = CovKernelParams(family, **kw)
        for _ in range(10):
            x, y = rng.normal(size=(2, 4))
            assert kernels.cov_eval(params, x, y) == pytest.approx(
                oracles.cov_value(family, x, y, **kw), rel=1e-12)


def test_cov_eval_dimension_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        kernels.cov_eval(CovKernelParams("rbf"), [1.0], [1.0, 2.0])


# ---------------------------------------------------------------------------
# profile_eval / local_weight


def test_profile_epanechnikov_peak():
    assert kernels.profile_eval(LocalKernelSpec("epanechnikov"),
                                0.0) == pytest.approx(0.75, rel=1e-14)


def test_profile_rectangular_outside_support():
    assert kernels.profile_eval(LocalKernelSpec("rectangular"), 1.5) == 0.0


def test_profile_gaussian_peak():
    value = kernels.profile_eval(LocalKernelSpec("gaussian"), 0.0)
    assert value == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-15)


def test_profile_hilbert():
    spec = LocalKernelSpec("hilbert")
    assert kernels.profile_eval(spec, 0.0) == math.inf
    assert kernels.profile_eval(spec, 0.5) == 2.0
    assert kernels.profile_eval(spec, 1.0) == 1.0
    assert kernels.profile_eval(spec, 1.0000001) == 0.0


def test_profile_negative_distance_rejected():
    with pytest.raises(ValueError, match="non-negative"):
        kernels.profile_eval(LocalKernelSpec("rectangular"), -0.1)


def test_unit_ball_volume_low_dimensions():
    assert kernels.unit_ball_volume(1) == pytest.approx(2.0, rel=1e-14)
    assert kernels.unit_ball_volume(2) == pytest.approx(math.pi, rel=1e-14)
    assert kernels.unit_ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0,
                                                        rel=1e-14)


def test_epanechnikov_constant_matches_dimension():
    # (d+2) / (2 V_d): 3/4 in 1-d, 2/pi in 2-d.
    assert LocalKernelSpec("epanechnikov", 1).epanechnikov_const == pytest.approx(0.75)
    assert LocalKernelSpec("epanechnikov", 2).epanechnikov_const == pytest.approx(
        2.0 / math.pi, rel=1e-14)


def test_local_weight_examples():
    assert kernels.local_weight(
        LocalKernelSpec("rectangular"), [0.5], [0.0], 2.0) == 0.5
    assert kernels.local_weight(
        LocalKernelSpec("hilbert"), [0.5], [0.0], 1.0) == 2.0
    assert kernels.local_weight(
        LocalKernelSpec("epanechnikov"), [1.0], [0.0], 1.0) == 0.0


def test_local_weight_requires_positive_bandwidth():
    with pytest.raises(ValueError, match="bandwidth"):
        kernels.local_weight(LocalKernelSpec("rectangular"), [0.0], [0.0], 0.0)


def test_compact_support_is_exact():
    rng = np.random.default_rng(13)
    for profile in ("rectangular", "epanechnikov", "hilbert"):
        spec = LocalKernelSpec(profile, dimension=2)
        for _ in range(20):
            x0 = rng.normal(size=2)
            h = float(rng.uniform(0.2, 2.0))
            direction = rng.normal(size=2)
            direction /= np.linalg.norm(direction)
            outside = x0 + direction * h * float(rng.uniform(1.0000001, 3.0))
            inside = x0 + direction * h * float(rng.uniform(0.01, 0.99))
            assert kernels.local_weight(spec, outside, x0, h) == 0.0
            assert kernels.local_weight(spec, inside, x0, h) > 0.0
    # Gaussian support extends past u = 1, where the compact profiles are
    # exactly zero (u = 5 here, well inside floating-point range).
    spec = LocalKernelSpec("gaussian", dimension=2)
    assert kernels.local_weight(spec, [0.5, 0.0], [0.0, 0.0], 0.1) > 0.0
    assert kernels.local_weight(LocalKernelSpec("rectangular", 2),
                                [0.5, 0.0], [0.0, 0.0], 0.1) == 0.0


# ---------------------------------------------------------------------------
# localized_cov


def test_localized_cov_at_center():
    value = kernels.localized_cov(
        CovKernelParams("rbf"), LocalKernelSpec("rectangular"), 1.0,
        [0.0], [0.0], [0.0])
    assert value == 1.0


def test_localized_cov_outside_support_is_zero():
    params = CovKernelParams("rbf")
    for profile in ("rectangular", "epanechnikov", "hilbert"):
        spec = LocalKernelSpec(profile)
        assert kernels.localized_cov(params, spec, 0.5, [0.0], [2.0], [0.1]) == 0.0
        assert kernels.localized_cov(params, spec, 0.5, [0.0], [0.1], [2.0]) == 0.0


def test_localized_cov_matches_term_by_term_oracle():
    rng = np.random.default_rng(14)
    params = CovKernelParams("rbf", lengthscale=0.7, amplitude=1.4)
    spec = LocalKernelSpec("epanechnikov")
    for _ in range(25):
        x0, x, y = rng.uniform(-1, 1, size=(3, 1))
        h = float(rng.uniform(0.5, 2.0))
        wx = oracles.weight_value("epanechnikov", x, x0, h)
        wy = oracles.weight_value("epanechnikov", y, x0, h)
        expected = (math.sqrt(wx) * oracles.cov_value(
            "rbf", x, y, lengthscale=0.7, amplitude=1.4) * math.sqrt(wy)
            if wx > 0 and wy > 0 else 0.0)
        value = kernels.localized_cov(params, spec, h, x0, x, y)
        assert value == pytest.approx(expected, rel=1e-12, abs=1e-15)


# ---------------------------------------------------------------------------
# gram / cov_vector / local_weight_vector


def test_gram_single_point():
    result = kernels.gram(CovKernelParams("rbf"), [[0.4]])
    assert result.shape == (1, 1)
    assert result[0, 0] == 1.0


def test_gram_symmetric_with_unit_diagonal():
    rng = np.random.default_rng(15)
    X = rng.normal(size=(3, 2))
    K = kernels.gram(CovKernelParams("rbf"), X)
    assert np.array_equal(K, K.T)
    assert np.allclose(np.diag(K), 1.0)


def test_gram_entries_match_pairwise_cov_eval():
    rng = np.random.default_rng(16)
    for family in kernels.FAMILIES:
        params = random_params(rng, family)
        X = rng.normal(size=(5, 3))
        K = kernels.gram(params, X)
        for i in range(5):
            for j in range(5):
                assert K[i, j] == pytest.approx(
                    kernels.cov_eval(params, X[i], X[j]), rel=1e-12, abs=1e-15)


def test_gram_cross_matrix():
    rng = np.random.default_rng(17)
    params = CovKernelParams("exponential", lengthscale=0.9)
    X = rng.normal(size=(4, 2))
    Y = rng.normal(size=(3, 2))
    K = kernels.gram(params, X, Y)
    assert K.shape == (4, 3)
    for i in range(4):
        for j in range(3):
            assert K[i, j] == pytest.approx(
                kernels.cov_eval(params, X[i], Y[j]), rel=1e-12)


def test_gram_dimension_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        kernels.gram(CovKernelParams("rbf"), np.zeros((2, 2)), np.zeros((2, 3)))


def test_cov_vector_matches_scalar_calls():
    rng = np.random.default_rng(18)
    params = CovKernelParams("rbf", lengthscale=0.6)
    X = rng.normal(size=(6, 2))
    x0 = rng.normal(size=2)
    vec = kernels.cov_vector(params, X, x0)
    for i in range(6):
        assert vec[i] == pytest.approx(kernels.cov_eval(params, X[i], x0),
                                       rel=1e-12)


def test_local_weight_vector_matches_scalar_calls():
    rng = np.random.default_rng(19)
    X = rng.uniform(-1, 1, size=(8, 1))
    X[0, 0] = 0.25  # exact hit for the hilbert infinity case below
    for profile in kernels.PROFILES:
        spec = LocalKernelSpec(profile)
        vec = kernels.local_weight_vector(spec, X, [0.25], 0.8)
        for i in range(8):
            assert vec[i] == kernels.local_weight(spec, X[i], [0.25], 0.8)
    assert kernels.local_weight_vector(
        LocalKernelSpec("hilbert"), X, [0.25], 0.8)[0] == math.inf


def test_base_gram_is_positive_semidefinite():
    rng = np.random.default_rng(20)
    for trial in range(200):
        family = kernels.FAMILIES[trial % 3]
        params = random_params(rng, family)
        n = int(rng.integers(2, 21))
        d = int(rng.integers(1, 6))
        X = rng.normal(size=(n, d))
        eigmin = float(np.linalg.eigvalsh(kernels.gram(params, X))[0])
        assert eigmin >= -1e-8 * max(1.0, float(np.max(np.diag(
            kernels.gram(params, X)))))


def test_localized_gram_is_diag_sandwich():
    rng = np.random.default_rng(21)
    params = CovKernelParams("rbf", lengthscale=0.5)
    spec = LocalKernelSpec("epanechnikov", dimension=2)
    X = rng.uniform(-0.5, 0.5, size=(7, 2))
    x0 = np.zeros(2)
    h = 1.0
    G = kernels.localized_gram(params, spec, h, x0, X)
    w = kernels.local_weight_vector(spec, X, x0, h)
    expected = np.sqrt(w)[:, None] * kernels.gram(params, X) * np.sqrt(w)[None, :]
    assert np.array_equal(G, expected)


def test_localized_gram_rejects_infinite_weights():
    params = CovKernelParams("rbf")
    spec = LocalKernelSpec("hilbert")
    with pytest.raises(ValueError, match="finite"):
        kernels.localized_gram(params, spec, 1.0, [0.0], [[0.0], [0.5]])
