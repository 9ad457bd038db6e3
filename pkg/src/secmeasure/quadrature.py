"""Integration engine on compact intervals.

Three entry points:

* ``integrate``          -- adaptive Gauss-Legendre with bisection, for
                            integrands that are smooth in the interior.
* ``integrate_singular`` -- tanh-sinh (double exponential) rule for weights
                            of the form (x-a)^alpha (b-x)^beta h(x).
* ``principal_value``    -- Cauchy principal values by singularity
                            subtraction, with the log term in closed form.

All routines accept vectorised integrands (callables mapping an ndarray of
abscissae to an ndarray of values); plain scalar callables are wrapped
transparently.  Everything here is pure and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import EvaluationFailure, NonConvergence, PoleOutsideInterval

__all__ = [
    "Interval",
    "IntegrationSpec",
    "EndpointExponents",
    "DEFAULT_SPEC",
    "integrate",
    "integrate_with_error",
    "integrate_singular",
    "principal_value",
    "tanh_sinh",
    "tanh_sinh_nodes",
]


@dataclass(frozen=True)
class Interval:
    """Compact interval [a, b] with a < b."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("interval endpoints must be finite")
        if not self.a < self.b:
            raise ValueError(f"need a < b, got [{self.a}, {self.b}]")

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    def contains(self, x: float, strict: bool = True) -> bool:
        if strict:
            return self.a < x < self.b
        return self.a <= x <= self.b

    def distance_to(self, z: complex) -> float:
        """Distance from a complex point to the interval as a subset of R."""
        x, y = z.real, z.imag
        dx = max(self.a - x, 0.0, x - self.b)
        return math.hypot(dx, y)


@dataclass(frozen=True)
class IntegrationSpec:
    """Accuracy knobs shared by every quadrature call."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_refinement_levels: int = 12

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_refinement_levels < 1:
            raise ValueError("need at least one refinement level")

    def tolerance_for(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_SPEC = IntegrationSpec()


@dataclass(frozen=True)
class EndpointExponents:
    """Exponents of (x-a)^alpha (b-x)^beta; both must be integrable (> -1)."""

    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if self.alpha <= -1 or self.beta <= -1:
            raise ValueError("endpoint exponents must exceed -1")

    @property
    def is_trivial(self) -> bool:
        return self.alpha == 0.0 and self.beta == 0.0


def _call(f: Callable, x: np.ndarray) -> np.ndarray:
    """Evaluate f on an array, accepting scalar-only callables too."""
    try:
        vals = np.asarray(f(x))
        if vals.shape != np.shape(x):
            raise TypeError
    except (TypeError, ValueError):
        vals = np.asarray([f(float(xi)) for xi in np.atleast_1d(x)])
    return vals


def _check_finite(vals: np.ndarray, what: str = "integrand") -> None:
    if not np.all(np.isfinite(vals)):
        raise EvaluationFailure(f"{what} returned a non-finite value")


# ---------------------------------------------------------------------------
# tanh-sinh rule
# ---------------------------------------------------------------------------

# Truncation of the doubly infinite trapezoid sum.  At |t| = 4.0 the distance
# of the mapped node to the endpoint is ~1e-37, small enough that even
# alpha = -1/2 weights contribute below 1e-15.
_TS_TMAX = 4.0


@lru_cache(maxsize=None)
def tanh_sinh_nodes(level: int):
    """Unit tanh-sinh nodes on (-1, 1) at mesh h = 2^-level.

    Returns ``(g, w, dm, dp)`` where g are the abscissae, w the weights,
    and dm = 1 - g, dp = 1 + g computed without cancellation.
    """
    h = 2.0 ** (-level)
    k = np.arange(-int(_TS_TMAX / h), int(_TS_TMAX / h) + 1)
    t = k * h
    u = 0.5 * np.pi * np.sinh(t)
    g = np.tanh(u)
    w = h * 0.5 * np.pi * np.cosh(t) / np.cosh(u) ** 2
    dm = 2.0 / (1.0 + np.exp(2.0 * u))   # 1 - g, exact near the right endpoint
    dp = 2.0 / (1.0 + np.exp(-2.0 * u))  # 1 + g
    keep = (dm > 0) & (dp > 0) & (w > 0)
    return g[keep], w[keep], dm[keep], dp[keep]


def tanh_sinh(fn: Callable, interval: Interval, spec: IntegrationSpec = DEFAULT_SPEC,
              start_level: int = 2) -> complex:
    """Tanh-sinh integration of ``fn(x, dist_left, dist_right)``.

    ``fn`` receives the mapped abscissae together with their distances to
    the two endpoints (computed without cancellation), so integrands with
    endpoint singularities can be evaluated accurately arbitrarily close
    to the boundary.
    """
    half = 0.5 * interval.width
    mid = interval.midpoint
    prev = None
    for level in range(start_level, start_level + spec.max_refinement_levels + 1):
        g, w, dm, dp = tanh_sinh_nodes(level)
        x = mid + half * g
        vals = np.asarray(fn(x, half * dp, half * dm))
        _check_finite(vals)
        est = half * (w @ vals)
        if prev is not None:
            if abs(est - prev) <= spec.tolerance_for(abs(est)):
                return est
        prev = est
    raise NonConvergence(
        f"tanh-sinh did not converge in {spec.max_refinement_levels} refinements")


# ---------------------------------------------------------------------------
# adaptive Gauss-Legendre
# ---------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(15)


def _gl_panel(f: Callable, a: float, b: float):
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * _GL_NODES
    vals = _call(f, x)
    _check_finite(vals)
    return half * (_GL_WEIGHTS @ vals)


def integrate_with_error(f: Callable, interval: Interval,
                         spec: IntegrationSpec = DEFAULT_SPEC):
    """Adaptive Gauss-Legendre integral of ``f``; returns (value, error estimate).

    Panels are bisected until the two-half refinement of each panel agrees
    with the single-panel estimate within its width-prorated share of the
    global tolerance.  Raises ``NonConvergence`` when the refinement budget
    is exhausted and the accumulated error estimate still exceeds the
    requested tolerance.
    """
    a, b = interval.a, interval.b
    rough = _gl_panel(f, a, b)
    tol_global = spec.tolerance_for(abs(rough))
    total = 0.0
    err = 0.0
    stack = [(a, b, rough, 0)]
    while stack:
        lo, hi, whole, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left = _gl_panel(f, lo, mid)
        right = _gl_panel(f, mid, hi)
        delta = abs(left + right - whole)
        if delta <= tol_global * (hi - lo) / interval.width or depth >= spec.max_refinement_levels:
            total = total + left + right
            err += delta
        else:
            stack.append((lo, mid, left, depth + 1))
            stack.append((mid, hi, right, depth + 1))
    if err > spec.tolerance_for(abs(total)):
        raise NonConvergence(
            f"adaptive Gauss-Legendre error estimate {err:.3e} exceeds tolerance")
    return total, err


def integrate(f: Callable, interval: Interval,
              spec: IntegrationSpec = DEFAULT_SPEC) -> float:
    """Adaptive Gauss-Legendre integral of a smooth integrand."""
    return integrate_with_error(f, interval, spec)[0]


# ---------------------------------------------------------------------------
# endpoint-singular weights
# ---------------------------------------------------------------------------

def integrate_singular(h: Callable, exps: EndpointExponents, interval: Interval,
                       spec: IntegrationSpec = DEFAULT_SPEC) -> float:
    """Integral of (x-a)^alpha (b-x)^beta h(x) with h smooth on [a, b]."""
    if exps.is_trivial:
        def fn(x, dl, dr):
            return _call(h, x)
    else:
        def fn(x, dl, dr):
            vals = _call(h, x)
            if exps.alpha != 0.0:
                vals = vals * dl ** exps.alpha
            if exps.beta != 0.0:
                vals = vals * dr ** exps.beta
            return vals
    return float(tanh_sinh(fn, interval, spec).real)


# ---------------------------------------------------------------------------
# principal values
# ---------------------------------------------------------------------------

# Difference quotients (w(u)-w(x))/(x-u) are 0/0 at u = x; below this
# relative separation we switch to a one-sided numerical derivative.
QUOTIENT_FALLBACK = 1e-8
DERIVATIVE_STEP = 1e-6


def numerical_derivative(f: Callable, x: float, fx: float, lo: float, hi: float,
                         scale: float) -> float:
    """Derivative estimate at x: centered where the interval allows,
    one-sided with the same step when x sits within a step of a boundary."""
    h = DERIVATIVE_STEP * scale
    if x - h > lo and x + h < hi:
        return (f(x + h) - f(x - h)) / (2.0 * h)
    step = h if x <= 0.5 * (lo + hi) else -h
    return (f(x + step) - fx) / step


def difference_quotient(f: Callable, x: float, u: np.ndarray, fx: float,
                        fu: np.ndarray, scale: float, lo: float, hi: float,
                        sign: float = 1.0) -> np.ndarray:
    """(f(u) - f(x)) / (u - x) with a derivative fallback near u = x.

    ``sign=-1`` yields (f(u) - f(x)) / (x - u) instead.
    """
    d = u - x
    near = np.abs(d) < QUOTIENT_FALLBACK * scale
    safe = np.where(near, 1.0, d)
    q = (fu - fx) / safe
    if np.any(near):
        q = np.where(near, numerical_derivative(f, x, fx, lo, hi, scale), q)
    return sign * q


def principal_value(w: Callable, pole: float, interval: Interval,
                    spec: IntegrationSpec = DEFAULT_SPEC) -> float:
    """PV integral of w(u)/(pole - u) over the interval.

    Realized by singularity subtraction::

        PV = int (w(u) - w(pole))/(pole - u) du
             + w(pole) * ln((pole - a)/(b - pole))

    The subtracted integrand has a removable singularity at the pole and is
    handed to the tanh-sinh engine, which also absorbs any integrable
    endpoint singularities of w itself.
    """
    if not interval.contains(pole):
        raise PoleOutsideInterval(f"pole {pole} not in ({interval.a}, {interval.b})")
    wp = float(w(pole))
    scale = interval.width

    def fn(x, dl, dr):
        fu = _call(w, x)
        return difference_quotient(w, pole, x, wp, fu, scale,
                                   interval.a, interval.b, sign=-1.0)

    sub = float(tanh_sinh(fn, interval, spec).real)
    return sub + wp * math.log((pole - interval.a) / (interval.b - pole))
