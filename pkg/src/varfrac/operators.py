"""The six variable-order fractional operators plus the power identity.

Conventions, frozen once and guarded by a runtime self-check:

* left-sided kernels read the order as ``alpha(t, tau)`` where t is the
  evaluation point and tau the integration variable;
* right-sided kernels read it with the arguments swapped,
  ``alpha(tau, t)``, exactly as the operators are defined;
* derivative-type operators integrate with the complementary order
  1 - alpha and then differentiate the resulting grid (the right-sided
  one with a leading minus sign);
* Caputo-type operators apply the complementary-order integral to the
  grid derivative of the input, so constants are annihilated exactly.

Every operator returns 0 at its degenerate endpoint (t = a for left,
t = b for right operators).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .exceptions import DomainError, VarfracError
from .gammafn import gamma
from .grids import GridFunction, OrderFunction
from .quadrature import (
    QuadratureSpec,
    SingularIntegrand,
    differentiate_grid,
    integrate_singular_batch,
)

_LEFT_STRUCTURE = {"constant": "uniform", "t_only": "row", "bivariate": "full"}
# swapped arguments make a t-only order vary along the integration axis
_RIGHT_STRUCTURE = {"constant": "uniform", "t_only": "full", "bivariate": "full"}


def _left_integrand(density, order: OrderFunction) -> SingularIntegrand:
    return SingularIntegrand(
        exponent=lambda t, tau: order(t, tau),
        density=density,
        singular_end="right",
        mu_lo=order.range_lo,
        mu_hi=order.range_hi,
        exponent_structure=_LEFT_STRUCTURE[order.kind],
    )


def _right_integrand(density, order: OrderFunction) -> SingularIntegrand:
    return SingularIntegrand(
        exponent=lambda t, tau: order(tau, t),
        density=density,
        singular_end="left",
        mu_lo=order.range_lo,
        mu_hi=order.range_hi,
        exponent_structure=_RIGHT_STRUCTURE[order.kind],
    )


def _check_point(f: GridFunction, t: float):
    if not f.a <= t <= f.b:
        raise DomainError(f"t={t} lies outside [{f.a}, {f.b}]")


def _derivative_window(f: GridFunction):
    # the fourth-order central stencil spans two nodes on each side
    return f.a + 2.0 * f.h, f.b - 2.0 * f.h


def _check_derivative_point(f: GridFunction, t: float):
    lo, hi = _derivative_window(f)
    if not lo <= t <= hi:
        raise DomainError(
            f"derivative stencil does not reach t={t}; valid sub-interval is "
            f"[{lo:.6g}, {hi:.6g}]")


# --- integrals -----------------------------------------------------------

def left_rl_integral_grid(f: GridFunction, order: OrderFunction,
                          spec: QuadratureSpec, ts=None) -> np.ndarray:
    """Left integral of f evaluated at every point of ``ts`` (default: mesh)."""
    _argument_convention_guard()
    ts = f.nodes if ts is None else np.atleast_1d(np.asarray(ts, dtype=float))
    integrand = _left_integrand(f, order)
    return integrate_singular_batch(integrand, np.full_like(ts, f.a), ts, spec)


def right_rl_integral_grid(f: GridFunction, order: OrderFunction,
                           spec: QuadratureSpec, ts=None) -> np.ndarray:
    """Right integral of f evaluated at every point of ``ts`` (default: mesh)."""
    _argument_convention_guard()
    ts = f.nodes if ts is None else np.atleast_1d(np.asarray(ts, dtype=float))
    integrand = _right_integrand(f, order)
    return integrate_singular_batch(integrand, ts, np.full_like(ts, f.b), spec)


def left_rl_integral(f: GridFunction, order: OrderFunction, t: float,
                     spec: QuadratureSpec) -> float:
    """Integral of (t-tau)^(alpha(t,tau)-1) / Gamma(alpha(t,tau)) * f(tau)
    over [a, t]; defined as 0 at t = a."""
    _check_point(f, t)
    return float(left_rl_integral_grid(f, order, spec, ts=[t])[0])


def right_rl_integral(f: GridFunction, order: OrderFunction, t: float,
                      spec: QuadratureSpec) -> float:
    """Integral of (tau-t)^(alpha(tau,t)-1) / Gamma(alpha(tau,t)) * f(tau)
    over [t, b]; defined as 0 at t = b.  Note the swapped order arguments."""
    _check_point(f, t)
    return float(right_rl_integral_grid(f, order, spec, ts=[t])[0])


# --- Riemann-Liouville derivatives ---------------------------------------

def left_rl_derivative_grid(f: GridFunction, order: OrderFunction,
                            spec: QuadratureSpec) -> GridFunction:
    """d/dt of the complementary-order left integral, on the whole mesh.

    Values within two nodes of either endpoint come from one-sided
    stencils and are unreliable when the inner integral is not smooth
    there; pointwise accessors enforce the central-stencil window.
    """
    inner = left_rl_integral_grid(f, order.complement(), spec)
    return differentiate_grid(f.replace_values(inner))


def right_rl_derivative_grid(f: GridFunction, order: OrderFunction,
                             spec: QuadratureSpec) -> GridFunction:
    """-d/dt of the complementary-order right integral, on the whole mesh."""
    inner = right_rl_integral_grid(f, order.complement(), spec)
    d = differentiate_grid(f.replace_values(inner))
    return f.replace_values(-d.values)


def left_rl_derivative(f: GridFunction, order: OrderFunction, t: float,
                       spec: QuadratureSpec) -> float:
    _check_point(f, t)
    _check_derivative_point(f, t)
    return left_rl_derivative_grid(f, order, spec)(t)


def right_rl_derivative(f: GridFunction, order: OrderFunction, t: float,
                        spec: QuadratureSpec) -> float:
    _check_point(f, t)
    _check_derivative_point(f, t)
    return right_rl_derivative_grid(f, order, spec)(t)


# --- Caputo derivatives ---------------------------------------------------

def left_caputo_grid(f: GridFunction, order: OrderFunction,
                     spec: QuadratureSpec, ts=None) -> np.ndarray:
    fp = differentiate_grid(f)
    return left_rl_integral_grid(fp, order.complement(), spec, ts=ts)


def right_caputo_grid(f: GridFunction, order: OrderFunction,
                      spec: QuadratureSpec, ts=None) -> np.ndarray:
    fp = differentiate_grid(f)
    return -right_rl_integral_grid(fp, order.complement(), spec, ts=ts)


def left_caputo(f: GridFunction, order: OrderFunction, t: float,
                spec: QuadratureSpec) -> float:
    """Complementary-order left integral applied to f'; kills constants."""
    _check_point(f, t)
    return float(left_caputo_grid(f, order, spec, ts=[t])[0])


def right_caputo(f: GridFunction, order: OrderFunction, t: float,
                 spec: QuadratureSpec) -> float:
    """Mirror operator with the minus sign inside the kernel as printed."""
    _check_point(f, t)
    return float(right_caputo_grid(f, order, spec, ts=[t])[0])


# --- closed-form oracle ---------------------------------------------------

def power_identity_reference(gamma_exp: float, order: OrderFunction, t,
                             a: float = None):
    """Left integral of (t-a)^g for a t-only order, in closed form:
    Gamma(g+1) (t-a)^(g+beta(t)) / Gamma(g+beta(t)+1).  No quadrature."""
    if not gamma_exp > -1.0:
        raise DomainError(f"power exponent must exceed -1, got {gamma_exp}")
    if order.kind == "bivariate":
        raise DomainError("the power identity needs a t-only (or constant) order")
    if a is None:
        a = order.interval[0]
    t_arr = np.asarray(t, dtype=float)
    beta = np.asarray(order(t_arr, t_arr), dtype=float)
    shift = np.where(t_arr > a, t_arr - a, 0.0)
    out = gamma(gamma_exp + 1.0) * shift ** (gamma_exp + beta) / gamma(gamma_exp + beta + 1.0)
    if np.ndim(t) == 0:
        return float(out)
    return out


# --- argument-order self-check --------------------------------------------

@lru_cache(maxsize=1)
def _argument_convention_guard() -> bool:
    """One-time guard against silently swapped order arguments.

    With an order depending on its first argument only, the left kernel
    is constant along the integration axis (closed form available) while
    the right kernel must vary with it.  A swap would make the right
    operator collapse onto the closed form; assert it does not.
    """
    order = OrderFunction(expr="0.3 + 0.4*t", range_lo=0.3, range_hi=0.7,
                          margin_n=2, interval=(0.0, 1.0))
    ones = GridFunction(0.0, 1.0, np.ones(17))
    spec = QuadratureSpec(panels=8, tolerance=1e-4, max_refinements=4)
    t = 0.2
    swapped_would_give = (1.0 - t) ** order(t, t) / gamma(order(t, t) + 1.0)
    integrand = _right_integrand(ones, order)
    actual = float(integrate_singular_batch(integrand, [t], [ones.b], spec)[0])
    if abs(actual - swapped_would_give) < 1e-3:
        raise VarfracError(
            "order-argument convention violated: the right-sided kernel does "
            "not vary with the integration variable")
    # and the left kernel with the same order must match the closed form
    left_integrand_ = _left_integrand(ones, order)
    left_val = float(integrate_singular_batch(left_integrand_, [ones.a], [0.7], spec)[0])
    closed = 0.7 ** order(0.7, 0.7) / gamma(order(0.7, 0.7) + 1.0)
    if abs(left_val - closed) > 1e-3:
        raise VarfracError(
            "order-argument convention violated: the left-sided kernel does "
            "not read the order at the evaluation point")
    return True
