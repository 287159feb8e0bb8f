"""Selects the array-kernel implementation at import time.

The compiled Cython core (``lsgpr._ckernels``) is preferred; if it is not
built, or the environment variable ``LSGPR_NO_EXT`` is set to a non-empty
value, the NumPy fallback (``lsgpr._npkernels``) is used.  Both expose the
same functions with identical semantics; ``tests/test_backends.py`` pins
their agreement.
"""

import os

from lsgpr import _npkernels

FAMILY_RBF = _npkernels.FAMILY_RBF
FAMILY_EXPONENTIAL = _npkernels.FAMILY_EXPONENTIAL
FAMILY_POLYNOMIAL = _npkernels.FAMILY_POLYNOMIAL

PROFILE_RECTANGULAR = _npkernels.PROFILE_RECTANGULAR
PROFILE_EPANECHNIKOV = _npkernels.PROFILE_EPANECHNIKOV
PROFILE_GAUSSIAN = _npkernels.PROFILE_GAUSSIAN
PROFILE_HILBERT = _npkernels.PROFILE_HILBERT

if os.environ.get("LSGPR_NO_EXT"):
    _impl = _npkernels
else:
    try:
        from lsgpr import _ckernels as _impl
    except ImportError:
        _impl = _npkernels

name = "cython" if _impl is not _npkernels else "numpy"

sq_dists = _impl.sq_dists
local_weights = _impl.local_weights
cov_vector = _impl.cov_vector
gram = _impl.gram
gram_sym = _impl.gram_sym


def implementations():
    """Return the available implementations keyed by name (for benchmarks)."""
    impls = {"numpy": _npkernels}
    try:
        from lsgpr import _ckernels

        impls["cython"] = _ckernels
    except ImportError:
        pass
    return impls
