"""Gamma function on the positive reals plus the rational two-sided bounds.

The Gamma evaluation uses the Lanczos approximation with g=7 and 9
coefficients (the classic tabulated set, accurate to ~15 significant
digits), combined with the reflection formula for arguments below 1/2 so
that small kernel exponents never lose precision.  Everything is
vectorized: scalars in, scalar out; arrays in, arrays out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError

_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


def _lanczos_series(z):
    # z >= 0.5 assumed; returns Gamma(z)
    zm1 = z - 1.0
    acc = np.full_like(z, _LANCZOS_COEFFS[0])
    for i, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc = acc + c / (zm1 + i)
    t = zm1 + _LANCZOS_G + 0.5
    return _SQRT_TWO_PI * t ** (zm1 + 0.5) * np.exp(-t) * acc


def gamma(x):
    """Gamma(x) for x > 0, scalar or ndarray.

    Relative error is below 1e-12 on (0, 50].  Non-positive arguments
    raise :class:`DomainError`.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError("gamma requires a positive finite argument")
    z = np.where(arr < 0.5, 1.0 - arr, arr)
    core = _lanczos_series(z)
    # sin argument clipped to the reflection branch only
    small = np.minimum(arr, 0.5)
    reflected = math.pi / (np.sin(math.pi * small) * core)
    out = np.where(arr < 0.5, reflected, core)
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class GammaBounds:
    """Two-sided rational bounds on Gamma(x+1) for x in [0, 1]."""

    x: float
    lower: float
    upper: float


def gamma_bounds(x: float) -> GammaBounds:
    """Bounds (x^2+1)/(x+1) <= Gamma(x+1) <= (x^2+2)/(x+2) on [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"bounds are stated for x in [0, 1], got {x}")
    return GammaBounds(
        x=x,
        lower=(x * x + 1.0) / (x + 1.0),
        upper=(x * x + 2.0) / (x + 2.0),
    )
