"""Sampled functions on uniform meshes and variable order functions.

``GridFunction`` carries samples on a uniform mesh over [a, b] together
with a shape-preserving piecewise-cubic interpolant for off-node
quadrature points.  Slopes are estimated with the same fourth-order
finite-difference stencils used for grid differentiation and then
limited to keep the interpolant monotone wherever the data is; this
keeps the interpolant exact for monotone cubics, which the fractional
operators rely on near interval endpoints where kernels amplify
relative errors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .exceptions import DomainError, PreconditionError
from .expressions import Expression, evaluate, parse

_RANGE_SLACK = 1e-12


def fd_slopes(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order finite-difference slopes on a uniform mesh.

    Central five-point stencils in the interior, one-sided five-point
    stencils at the two nodes next to each boundary.  Exact for
    polynomials of degree <= 4.  Requires at least 5 nodes.
    """
    v = np.asarray(values, dtype=float)
    if v.size < 5:
        raise DomainError("differentiation needs a mesh of at least 5 points")
    d = np.empty_like(v)
    d[2:-2] = (v[:-4] - 8.0 * v[1:-3] + 8.0 * v[3:-1] - v[4:]) / (12.0 * h)
    d[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * h)
    d[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / (12.0 * h)
    d[-2] = (3.0 * v[-1] + 10.0 * v[-2] - 18.0 * v[-3] + 6.0 * v[-4] - v[-5]) / (12.0 * h)
    d[-1] = (25.0 * v[-1] - 48.0 * v[-2] + 36.0 * v[-3] - 16.0 * v[-4] + 3.0 * v[-5]) / (12.0 * h)
    return d


def _limit_slopes(values: np.ndarray, slopes: np.ndarray, h: float) -> np.ndarray:
    """Clip slope estimates into the monotonicity-preserving region."""
    d = slopes.copy()
    secants = np.diff(values) / h
    left = secants[:-1]
    right = secants[1:]
    interior = d[1:-1]
    # data extremum or flat spot: force a flat tangent
    extremum = left * right <= 0.0
    wrong_sign = interior * np.where(extremum, 0.0, right) < 0.0
    cap = 3.0 * np.minimum(np.abs(left), np.abs(right))
    limited = np.sign(interior) * np.minimum(np.abs(interior), cap)
    d[1:-1] = np.where(extremum | wrong_sign, 0.0, limited)
    for idx, sec in ((0, secants[0]), (-1, secants[-1])):
        if sec == 0.0 or d[idx] * sec < 0.0:
            d[idx] = 0.0
        elif abs(d[idx]) > 3.0 * abs(sec):
            d[idx] = 3.0 * sec
    return d


@dataclass(frozen=True)
class GridFunction:
    """Real function sampled on a uniform mesh over [a, b]."""

    a: float
    b: float
    values: np.ndarray
    interp: str = "pchip-cubic"

    def __post_init__(self):
        if not self.a < self.b:
            raise DomainError(f"need a < b, got [{self.a}, {self.b}]")
        v = np.array(self.values, dtype=float)
        if v.ndim != 1 or v.size < 5:
            raise DomainError("grid needs at least 5 samples (N >= 4)")
        if not np.all(np.isfinite(v)):
            raise DomainError("grid values must be finite")
        if self.interp != "pchip-cubic":
            raise DomainError(f"unsupported interpolation rule {self.interp!r}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_intervals(self) -> int:
        return self.values.size - 1

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.n_intervals

    @cached_property
    def nodes(self) -> np.ndarray:
        x = np.linspace(self.a, self.b, self.values.size)
        x.setflags(write=False)
        return x

    @cached_property
    def _spline(self) -> CubicHermiteSpline:
        raw = fd_slopes(self.values, self.h)
        d = _limit_slopes(self.values, raw, self.h)
        return CubicHermiteSpline(self.nodes, self.values, d)

    def __call__(self, x):
        clipped = np.clip(np.asarray(x, dtype=float), self.a, self.b)
        out = self._spline(clipped)
        if np.ndim(x) == 0:
            return float(out)
        return out

    @classmethod
    def from_callable(cls, fn, a: float, b: float, n_intervals: int) -> "GridFunction":
        x = np.linspace(a, b, n_intervals + 1)
        return cls(a=a, b=b, values=np.asarray(fn(x), dtype=float) * np.ones_like(x))

    @classmethod
    def from_expression(cls, expr, a: float, b: float, n_intervals: int) -> "GridFunction":
        if isinstance(expr, str):
            expr = parse(expr)
        x = np.linspace(a, b, n_intervals + 1)
        vals = evaluate(expr, {"t": x})
        return cls(a=a, b=b, values=np.broadcast_to(np.asarray(vals, float), x.shape).copy())

    def replace_values(self, values: np.ndarray) -> "GridFunction":
        return GridFunction(a=self.a, b=self.b, values=values, interp=self.interp)


@dataclass(frozen=True)
class OrderFunction:
    """Bivariate fractional order alpha(t, tau) with certified range.

    The declared range [range_lo, range_hi] must contain every value the
    expression takes on [a, b]^2; this is spot-checked on a 64x64 grid
    at construction.  ``margin_n`` is the integer margin appearing in
    the operator hypotheses (lower bound 1/n for integral orders, upper
    bound 1 - 1/n for derivative orders).
    """

    expr: Expression
    range_lo: float
    range_hi: float
    margin_n: int
    interval: tuple = (0.0, 1.0)
    kind: str = field(init=False, default="")

    def __post_init__(self):
        if isinstance(self.expr, str):
            object.__setattr__(self, "expr", parse(self.expr))
        if not (0.0 < self.range_lo <= self.range_hi < 1.0):
            raise DomainError(
                f"order range must satisfy 0 < lo <= hi < 1, got "
                f"[{self.range_lo}, {self.range_hi}]")
        if int(self.margin_n) != self.margin_n or self.margin_n < 2:
            raise DomainError(f"margin n must be an integer >= 2, got {self.margin_n}")
        object.__setattr__(self, "margin_n", int(self.margin_n))
        extra = self.expr.free_vars - {"t", "tau"}
        if extra:
            raise DomainError(
                f"order functions may only use t and tau, found {sorted(extra)}")
        if self.expr.free_vars == frozenset():
            kind = "constant"
        elif self.expr.free_vars == {"t"}:
            kind = "t_only"
        else:
            kind = "bivariate"
        object.__setattr__(self, "kind", kind)
        a, b = self.interval
        if not a < b:
            raise DomainError(f"order interval must satisfy a < b, got [{a}, {b}]")
        side = np.linspace(a, b, 64)
        tt, uu = np.meshgrid(side, side, indexing="ij")
        vals = self(tt, uu)
        if np.min(vals) < self.range_lo - _RANGE_SLACK or \
                np.max(vals) > self.range_hi + _RANGE_SLACK:
            raise DomainError(
                f"order expression '{self.expr.source}' leaves its declared range "
                f"[{self.range_lo}, {self.range_hi}] on [{a}, {b}]^2: observed "
                f"[{np.min(vals):.6g}, {np.max(vals):.6g}]")

    def __call__(self, t, tau):
        out = evaluate(self.expr, {"t": t, "tau": tau})
        shape = np.broadcast_shapes(np.shape(t), np.shape(tau))
        if np.ndim(out) == 0:
            return np.full(shape, float(out)) if shape else float(out)
        return out

    def complement(self) -> "OrderFunction":
        """The order 1 - alpha, used by derivative-type operators."""
        from .expressions import Binary, Num, to_source
        one_minus = Binary(0, "-", Num(0, 1.0), self.expr.ast)
        src = to_source(one_minus)
        return OrderFunction(
            expr=parse(src),
            range_lo=1.0 - self.range_hi,
            range_hi=1.0 - self.range_lo,
            margin_n=self.margin_n,
            interval=self.interval,
        )

    def require_integral_margin(self):
        """Integral-order hypothesis: 1/n < order on the whole square."""
        if not self.range_lo > 1.0 / self.margin_n:
            raise PreconditionError(
                f"integral-order hypothesis violated: requires range_lo > 1/n, "
                f"got {self.range_lo} <= 1/{self.margin_n}")

    def require_derivative_margin(self):
        """Derivative-order hypothesis: order < 1 - 1/n on the whole square."""
        if not self.range_hi < 1.0 - 1.0 / self.margin_n:
            raise PreconditionError(
                f"derivative-order hypothesis violated: requires range_hi < 1 - 1/n, "
                f"got {self.range_hi} >= 1 - 1/{self.margin_n}")

    @classmethod
    def constant(cls, value: float, margin_n: int = 2,
                 interval: tuple = (0.0, 1.0)) -> "OrderFunction":
        return cls(expr=parse(repr(float(value))), range_lo=value, range_hi=value,
                   margin_n=margin_n, interval=interval)
