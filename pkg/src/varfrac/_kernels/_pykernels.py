"""Pure numpy implementation of the singular-kernel reductions.

Mirrors the compiled backend: same formulas, same recurrence-based
Gamma evaluation, so the two paths agree to rounding noise.
"""

from __future__ import annotations

import numpy as np

from ..gammafn import _lanczos_series


def _gamma_shift1(mu):
    # Gamma(mu) = Gamma(mu + 1) / mu, branch-free on (0, 1]
    return _lanczos_series(mu + 1.0) / mu


def power_rowsum(logdist, mu_minus_1, coeff):
    """Row sums of coeff * exp(mu_minus_1 * logdist)."""
    return np.add.reduce(coeff * np.exp(mu_minus_1 * logdist), axis=1)


def power_gamma_rowsum(logdist, mu, coeff):
    """Row sums of coeff * exp((mu - 1) * logdist) / Gamma(mu)."""
    contrib = coeff * np.exp((mu - 1.0) * logdist) / _gamma_shift1(mu)
    return np.add.reduce(contrib, axis=1)
