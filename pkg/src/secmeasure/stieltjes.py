"""Stieltjes transforms, the reducer, and the secondary measure.

The transform S_rho(z) = int rho(t)/(z - t) dt is computed by tanh-sinh
quadrature away from the support and by singularity subtraction with an
interval split when z approaches the cut.  The reducer

    phi(x) = 2 PV int rho(t)/(x - t) dt

is the jump data of S across the cut and enters the closed form of the
secondary measure, mu = rho / (phi^2/4 + pi^2 rho^2).  Stieltjes-Perron
inversion goes the other way: it recovers a density from an arbitrary
transform evaluator by extrapolating (S(x - i eps) - S(x + i eps))/(2 i pi)
to eps = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import (DegenerateMeasure, DomainError, ExtrapolationDivergence,
                     NonConvergence, PointOnInterval, TransformZero)
from .measures import BaseDensity, moment
from .quadrature import (DEFAULT_SPEC, IntegrationSpec, Interval,
                         QUOTIENT_FALLBACK, integrate, tanh_sinh,
                         tanh_sinh_nodes)

__all__ = [
    "SecondaryMeasureData",
    "stieltjes_transform",
    "reducer",
    "lerch_phi_half",
    "secondary_measure",
    "secondary_transform",
    "perron_invert",
]

# Transform arguments closer than this to the support are rejected.
ONCUT_DISTANCE = 1e-12
# The reducer is only served on [a + margin*w, b - margin*w].
REDUCER_MARGIN = 1e-4
# Below this distance (in interval widths) the transform switches to the
# subtracted, split-interval evaluation.
NEAR_CUT_FRACTION = 5e-2

_PHI_START_LEVEL = 3
_PHI_MAX_LEVEL = 12
_PHI_CHUNK = 64
# Points closer than this (in widths) to an endpoint are clamped before the
# reducer quadrature: below it the pole region is unresolvable at the level
# cap, and every downstream weighted integral is insensitive to phi there.
_PHI_CLAMP = 1e-9


# ---------------------------------------------------------------------------
# reducer
# ---------------------------------------------------------------------------

def _phi_batch(rho: BaseDensity, xs, dxl, dxr, spec: IntegrationSpec):
    """Reducer values by singularity subtraction on refining tanh-sinh rules.

    phi(x)/2 = int (rho(u) - rho(x))/(x - u) du + rho(x) ln(dxl/dxr); the
    pole separation x - u is formed as a difference of endpoint distances,
    which stays exact when both points crowd the same endpoint.
    """
    interval = rho.interval
    half, mid = 0.5 * interval.width, interval.midpoint
    scale = interval.width
    rx = np.asarray(rho.value_at(xs, dxl, dxr), dtype=float)
    base = rx * np.log(dxl / dxr)
    interior = (dxl > REDUCER_MARGIN * scale) & (dxr > REDUCER_MARGIN * scale)
    drx = np.full(len(xs), np.nan)

    def deriv(sel):
        miss = sel[np.isnan(drx[sel])]
        if len(miss):
            drx[miss] = np.asarray(
                rho.derivative_at(xs[miss], dxl[miss], dxr[miss]), dtype=float)
        return drx[sel]

    est = np.full(len(xs), np.nan)
    done = np.zeros(len(xs), dtype=bool)
    for level in range(_PHI_START_LEVEL, _PHI_MAX_LEVEL + 1):
        g, w, dm, dp = tanh_sinh_nodes(level)
        u, dl, dr = mid + half * g, half * dp, half * dm
        ru = np.asarray(rho.value_at(u, dl, dr), dtype=float)
        act = np.nonzero(~done)[0]
        cur = np.empty(len(act))
        mag = np.empty(len(act))
        for s in range(0, len(act), _PHI_CHUNK):
            sel = act[s:s + _PHI_CHUNK]
            # x - u as a difference of distances to the nearer endpoint of
            # x; stays exact when x and u crowd the same endpoint.
            use_left = (dxl[sel] <= dxr[sel])[:, None]
            den = np.where(use_left, dxl[sel, None] - dl[None, :],
                           dr[None, :] - dxr[sel, None])
            exact = den == 0.0
            quot = (ru[None, :] - rx[sel, None]) / np.where(exact, 1.0, den)
            # Derivative fallback only where both x and the node sit well
            # inside the interval; near an endpoint the raw quotient is the
            # accurate one (den is an exact difference of tiny distances).
            swap = ((np.abs(den) < QUOTIENT_FALLBACK * scale)
                    & interior[sel, None]) | exact
            if swap.any():
                quot = np.where(swap, -deriv(sel)[:, None], quot)
            cur[s:s + _PHI_CHUNK] = half * (quot @ w) + base[sel]
            mag[s:s + _PHI_CHUNK] = half * (np.abs(quot) @ w) + np.abs(base[sel])
        if level > _PHI_START_LEVEL:
            tol = np.maximum(np.maximum(spec.abs_tol, spec.rel_tol * np.abs(cur)),
                             100 * np.finfo(float).eps * mag)
            # Within the endpoint margin phi only enters downstream through
            # phi^2/4 + pi^2 rho^2, which is rho^2-dominated exactly where
            # the subtraction above is ill-conditioned (singular densities).
            # Accept any error that perturbs that combination below 1e-9.
            rxa = np.abs(rx[act])
            slack = np.where(interior[act], 0.0,
                             1e-9 * (cur ** 2 + math.pi ** 2 * rxa ** 2)
                             / (2.0 * np.abs(cur) + 1e-30))
            done[act] = np.abs(cur - est[act]) <= np.maximum(tol, slack)
        est[act] = cur
        if done.all():
            return 2.0 * est
    raise NonConvergence(
        f"reducer quadrature for {rho.name!r} did not settle by level {_PHI_MAX_LEVEL}")


def _phi_values(rho: BaseDensity, xs, dxl, dxr,
                spec: IntegrationSpec = DEFAULT_SPEC) -> np.ndarray:
    """Cached reducer phi at points supplied with exact endpoint distances."""
    interval = rho.interval
    clamp = _PHI_CLAMP * interval.width
    xs = np.atleast_1d(np.asarray(xs, dtype=float)).copy()
    dxl = np.atleast_1d(np.asarray(dxl, dtype=float)).copy()
    dxr = np.atleast_1d(np.asarray(dxr, dtype=float)).copy()
    low, high = dxl < clamp, dxr < clamp
    xs[low], dxl[low], dxr[low] = interval.a + clamp, clamp, interval.width - clamp
    xs[high], dxl[high], dxr[high] = interval.b - clamp, interval.width - clamp, clamp
    out = np.empty_like(xs)
    todo = []
    for i in range(len(xs)):
        cached = rho._phi.get((xs[i], spec.rel_tol))
        if cached is None:
            todo.append(i)
        else:
            out[i] = cached
    if todo:
        idx = np.asarray(todo)
        vals = _phi_batch(rho, xs[idx], dxl[idx], dxr[idx], spec)
        out[idx] = vals
        for i, v in zip(todo, vals):
            rho._phi[(xs[i], spec.rel_tol)] = float(v)
    return out


def reducer(rho: BaseDensity, x, spec: IntegrationSpec = DEFAULT_SPEC):
    """phi(x) = 2 PV int rho(t)/(x - t) dt at interior points.

    Points closer than 1e-4 interval widths to an endpoint are refused:
    phi can diverge there (logarithmically for the uniform density).
    """
    interval = rho.interval
    delta = REDUCER_MARGIN * interval.width
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs < interval.a + delta) or np.any(xs > interval.b - delta):
        raise DomainError(
            f"reducer of {rho.name!r} is served on "
            f"[{interval.a + delta:g}, {interval.b - delta:g}] only")
    vals = _phi_values(rho, xs, xs - interval.a, interval.b - xs, spec)
    return float(vals[0]) if np.isscalar(x) else vals


def lerch_phi_half(x: float) -> float:
    """Sum_{n>=0} x^n / (n - 1/2) for 0 < x < 1.

    Closed form: splitting off the n = 0 term and recognising the odd-index
    logarithm series gives 2 sqrt(x) artanh(sqrt(x)) - 2.
    """
    if not 0.0 < x < 1.0:
        raise DomainError(f"lerch_phi_half needs 0 < x < 1, got {x}")
    r = math.sqrt(x)
    return 2.0 * r * math.atanh(r) - 2.0


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def _weight_eval(rho: BaseDensity, t, dl, dr, shift: Optional[float]):
    vals = np.asarray(rho.value_at(t, dl, dr), dtype=float)
    if shift is not None:
        vals = vals * (np.asarray(t, dtype=float) - shift)
    return vals


def _cauchy_near_cut(rho: BaseDensity, z: complex, spec: IntegrationSpec,
                     shift: Optional[float]) -> complex:
    """int w(t)/(z - t) dt for z close to the cut, w = rho * (t - shift).

    Subtracting w at the projection of z leaves a bounded integrand; the
    closed-form log carries the near-singular part.  The interval is split
    so the endpoint singularities of rho and the sharp (scale Im z) feature
    at the projection are handled by different engines.
    """
    interval = rho.interval
    a, b = interval.a, interval.b
    x0 = z.real
    w0 = float(_weight_eval(rho, np.asarray(x0), x0 - a, b - x0, shift))
    delta = 0.5 * min(x0 - a, b - x0)

    def quot(t, dl, dr):
        return (_weight_eval(rho, t, dl, dr, shift) - w0) / (z - t)

    left = tanh_sinh(lambda t, dl, dr: quot(t, dl, b - t),
                     Interval(a, x0 - delta), spec)
    right = tanh_sinh(lambda t, dl, dr: quot(t, t - a, dr),
                      Interval(x0 + delta, b), spec)
    deep = IntegrationSpec(spec.rel_tol, spec.abs_tol,
                           max(spec.max_refinement_levels, 48))
    middle = integrate(lambda t: quot(t, t - a, b - t),
                       Interval(x0 - delta, x0 + delta), deep)
    return complex(left + right + middle + w0 * np.log((z - a) / (z - b)))


def _cauchy_integral(rho: BaseDensity, z: complex, spec: IntegrationSpec,
                     shift: Optional[float] = None) -> complex:
    interval = rho.interval
    dist = interval.distance_to(z)
    if dist < ONCUT_DISTANCE:
        raise PointOnInterval(
            f"{z} is within {ONCUT_DISTANCE:g} of [{interval.a}, {interval.b}]")
    width = interval.width
    margin = 1e-3 * width
    if (dist < NEAR_CUT_FRACTION * width
            and interval.a + margin < z.real < interval.b - margin):
        return _cauchy_near_cut(rho, z, spec, shift)

    def fn(t, dl, dr):
        return _weight_eval(rho, t, dl, dr, shift) / (z - t)

    return complex(tanh_sinh(fn, interval, spec, start_level=3))


def stieltjes_transform(rho: BaseDensity, z,
                        spec: IntegrationSpec = DEFAULT_SPEC) -> complex:
    """S_rho(z) = int rho(t)/(z - t) dt for z off the support interval."""
    return _cauchy_integral(rho, complex(z), spec)


def secondary_transform(rho: BaseDensity, z,
                        spec: IntegrationSpec = DEFAULT_SPEC) -> complex:
    """Transform of the secondary measure, S_mu(z) = z - c_1 - 1/S_rho(z).

    Evaluated as [int rho(t)(t - c_1)/(z - t) dt] / S_rho(z), which is the
    same quantity without the catastrophic cancellation of the homographic
    form at large |z|.
    """
    z = complex(z)
    s = _cauchy_integral(rho, z, spec)
    if abs(s) < 1e-14:
        raise TransformZero(f"|S_rho({z})| < 1e-14, cannot form S_mu")
    c1 = moment(rho, 1, spec)
    return _cauchy_integral(rho, z, spec, shift=c1) / s


# ---------------------------------------------------------------------------
# secondary measure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SecondaryMeasureData:
    """Secondary measure mu of a density, with its normalized companion.

    mu(x) = rho(x) / (phi^2(x)/4 + pi^2 rho^2(x)); its total mass is
    d0 = c_2 - c_1^2 and mu0 = mu/d0 is a probability density.
    """

    base: BaseDensity
    d0: float
    spec: IntegrationSpec

    def density_at(self, x, dleft, dright):
        """mu at points supplied with exact endpoint distances."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        dleft = np.atleast_1d(np.asarray(dleft, dtype=float))
        dright = np.atleast_1d(np.asarray(dright, dtype=float))
        rho = np.asarray(self.base.value_at(x, dleft, dright), dtype=float)
        phi = _phi_values(self.base, x, dleft, dright, self.spec)
        return rho / (0.25 * phi ** 2 + math.pi ** 2 * rho ** 2)

    def mu(self, x):
        interval = self.base.interval
        delta = REDUCER_MARGIN * interval.width
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(xs < interval.a + delta) or np.any(xs > interval.b - delta):
            raise DomainError(
                f"mu of {self.base.name!r} is served on "
                f"[{interval.a + delta:g}, {interval.b - delta:g}] only")
        vals = self.density_at(xs, xs - interval.a, interval.b - xs)
        return float(vals[0]) if np.isscalar(x) else vals

    def mu0(self, x):
        return self.mu(x) / self.d0

    def mass(self) -> float:
        """int mu, which must reproduce d0."""
        return float(tanh_sinh(self.density_at, self.base.interval,
                               self.spec).real)


def secondary_measure(rho: BaseDensity,
                      spec: IntegrationSpec = DEFAULT_SPEC) -> SecondaryMeasureData:
    """Secondary measure of rho; fails if c_2 - c_1^2 is numerically zero."""
    c1 = moment(rho, 1, spec)
    d0 = moment(rho, 2, spec) - c1 * c1
    if d0 <= 1e-12:
        raise DegenerateMeasure(
            f"{rho.name!r} has c_2 - c_1^2 = {d0:.3e}; secondary measure degenerate")
    return SecondaryMeasureData(rho, d0, spec)


# ---------------------------------------------------------------------------
# Stieltjes-Perron inversion
# ---------------------------------------------------------------------------

def _default_ladder():
    return tuple(1e-2 * 0.5 ** k for k in range(9))


def perron_invert(S: Callable[[complex], complex], x: float,
                  eps_ladder: Optional[Sequence[float]] = None) -> float:
    """Recover a density value from its transform evaluator.

    Evaluates the cut jump (S(x - i eps) - S(x + i eps))/(2 i pi) along a
    decreasing eps ladder and polynomial-extrapolates to eps = 0 (Neville).
    The extrapolant must settle and its imaginary part must be residual.
    """
    eps = np.asarray(_default_ladder() if eps_ladder is None else eps_ladder,
                     dtype=float)
    if len(eps) < 3 or np.any(eps <= 0) or np.any(np.diff(eps) >= 0):
        raise ValueError("eps ladder must be >= 3 decreasing positive values")
    vals = np.array([(S(complex(x, -e)) - S(complex(x, e))) / (2j * math.pi)
                     for e in eps], dtype=complex)
    n = len(eps)
    tab = vals.copy()
    diag = [tab[0]]
    for j in range(1, n):
        for i in range(n - j):
            tab[i] = (eps[i] * tab[i + 1] - eps[i + j] * tab[i]) \
                / (eps[i] - eps[i + j])
        diag.append(tab[0])
    diffs = np.abs(np.diff(diag))
    j = int(np.argmin(diffs)) + 1
    est = diag[j]
    if diffs[j - 1] > 1e-5 * max(1.0, abs(est)):
        raise ExtrapolationDivergence(
            f"cut-jump extrapolation at x={x} not Cauchy "
            f"(best gap {diffs[j - 1]:.3e})")
    if abs(est.imag) > 1e-6:
        raise ExtrapolationDivergence(
            f"cut-jump extrapolation at x={x} kept imaginary residue "
            f"{est.imag:.3e}")
    return float(est.real)
