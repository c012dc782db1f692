"""Kernel backend selection.

The weighted singular-kernel sums are the hot inner loop of every
operator evaluation, so they exist twice: a Cython extension compiled
with vectorization-friendly flags, and a pure numpy fallback with
identical semantics.  The compiled backend is used when it imported
successfully; set ``VARFRAC_PURE_PYTHON=1`` to force the numpy path
(useful for debugging and as the benchmark baseline).
"""

import os

import numpy as np

from . import _pykernels

if os.environ.get("VARFRAC_PURE_PYTHON") == "1":
    _backend = _pykernels
    IMPLEMENTATION = "python"
else:
    try:
        from . import _cykernels as _backend
        IMPLEMENTATION = "cython"
    except ImportError:  # extension not built; numpy semantics are identical
        _backend = _pykernels
        IMPLEMENTATION = "python"


def _ascontig(a, shape):
    arr = np.ascontiguousarray(a, dtype=np.float64)
    if arr.shape != shape:
        arr = np.ascontiguousarray(np.broadcast_to(arr, shape))
    return arr


def power_rowsum(logdist, mu_minus_1, coeff):
    """Row sums of coeff * exp(mu_minus_1 * logdist)."""
    logdist = np.ascontiguousarray(logdist, dtype=np.float64)
    return np.asarray(_backend.power_rowsum(
        logdist, _ascontig(mu_minus_1, logdist.shape), _ascontig(coeff, logdist.shape)))


def power_gamma_rowsum(logdist, mu, coeff):
    """Row sums of coeff * exp((mu - 1) * logdist) / Gamma(mu)."""
    logdist = np.ascontiguousarray(logdist, dtype=np.float64)
    return np.asarray(_backend.power_gamma_rowsum(
        logdist, _ascontig(mu, logdist.shape), _ascontig(coeff, logdist.shape)))
