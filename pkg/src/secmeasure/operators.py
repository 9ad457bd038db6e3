"""The isometry V and the closed-form integral-equation solver.

V(f)(x) = t f(x) + (1-t)(x-c_1) T(f)(x) maps the zero-mean hyperplane of
L^2(rho) isometrically onto that of L^2(rho_t/t); its inverse has the same
shape with rho and rho_t swapped and t replaced by 1/t.  That inverse
solves the integral equation

    (E_lambda):  f(x) + lambda (x-c_1) int (f(u)-f(x))/(u-x) rho(u) du = g(x)

in closed form, f = g - (lambda/(1+lambda)) (x-c_1) T_{rho_t}(g) with
t = 1/(1+lambda).  The module also verifies the composition, barycentric,
and transform-relation identities satisfied by the family of operators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import InvalidParameter
from .family import FamilyDensity, FamilyParameter, family, family_transform
from .measures import BaseDensity, inner_product, mean_project, moment
from .orthopoly import (PolynomialSequence, apply_T, orthonormal_polys,
                        recurrence_coefficients, secondary_polys)
from .quadrature import DEFAULT_SPEC, IntegrationSpec, _call
from .report import VerificationReport, numeric_report, property_report, timer

__all__ = [
    "OperatorContext",
    "IntegralEquationProblem",
    "make_context",
    "apply_V",
    "apply_V_inverse",
    "isometry_check",
    "transformed_polys",
    "solve_integral_equation",
    "residual_check",
    "shift_multiply",
    "barycentric_check",
    "composition_check",
    "transform_relation_check",
]


@dataclass(frozen=True)
class OperatorContext:
    """A density, a validated family parameter, and the derived rho_t."""

    rho: BaseDensity
    param: FamilyParameter
    c1: float
    rho_t: FamilyDensity
    spec: IntegrationSpec = DEFAULT_SPEC

    @property
    def t(self) -> float:
        return self.param.t

    def rho_t_tilde(self, x):
        """rho_t / t, the weight for which V is an isometry."""
        return self.rho_t.value(x) / self.param.t


def make_context(rho: BaseDensity, t: float,
                 spec: IntegrationSpec = DEFAULT_SPEC) -> OperatorContext:
    """Validate t and bundle rho with its family member rho_t."""
    dens = family(rho, t, spec)
    return OperatorContext(rho, dens.param, dens.c1, dens, spec)


def _as_values(f: Callable, xs: np.ndarray) -> np.ndarray:
    return np.asarray(_call(f, xs), dtype=float)


def apply_V(ctx: OperatorContext, f: Callable, x,
            spec: IntegrationSpec = DEFAULT_SPEC):
    """V(f)(x) = t f(x) + (1-t)(x-c_1) T(f)(x), T against the base density."""
    t = ctx.t
    shape = np.shape(x)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = t * _as_values(f, xs)
    if t != 1.0:
        tv = np.atleast_1d(apply_T(ctx.rho, f, xs, spec))
        out = out + (1.0 - t) * (xs - ctx.c1) * tv
    return float(out[0]) if shape == () else out.reshape(shape)


def apply_V_inverse(ctx: OperatorContext, f: Callable, x,
                    spec: IntegrationSpec = DEFAULT_SPEC):
    """V^{-1}(f)(x) = (1/t) f(x) + (1 - 1/t)(x-c_1) T_{rho_t}(f)(x)."""
    t = ctx.t
    shape = np.shape(x)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = _as_values(f, xs) / t
    if t != 1.0:
        tv = np.atleast_1d(apply_T(ctx.rho_t, f, xs, spec))
        out = out + (1.0 - 1.0 / t) * (xs - ctx.c1) * tv
    return float(out[0]) if shape == () else out.reshape(shape)


def isometry_check(ctx: OperatorContext, f: Callable,
                   spec: IntegrationSpec = DEFAULT_SPEC) -> VerificationReport:
    """Compare int f~^2 rho with int V(f~)^2 rho_t/t, f~ mean-projected.

    Passes when the two sides agree within 1e-6 * max(1, |left|).
    """
    with timer() as tm:
        ft = mean_project(f, ctx.rho, spec)
        left = inner_product(ft, ft, ctx.rho, spec)
        right = float(ctx.rho_t.weighted_integral(
            lambda xs: np.atleast_1d(apply_V(ctx, ft, xs, spec)) ** 2,
            spec).real) / ctx.t
    tol = 1e-6 * max(1.0, abs(left))
    return numeric_report(f"isometry {ctx.rho.name} t={ctx.t:g}",
                          left, right, tol, "paper", tm.ms)


def transformed_polys(ctx: OperatorContext, N: int,
                      spec: IntegrationSpec = DEFAULT_SPEC):
    """Orthonormal and secondary polynomials of rho_t from those of rho.

    P_n^t = (1/sqrt(t)) [t P_n + (1-t)(x - c_1) Q_n] for n >= 1 (P_0^t = 1)
    and Q_n^t = Q_n / sqrt(t).
    """
    rc = recurrence_coefficients(ctx.rho, N + 1, spec)
    Ps = orthonormal_polys(rc)
    c1 = ctx.c1
    d0 = moment(ctx.rho, 2, spec) - c1 * c1
    Qs = secondary_polys(rc, d0)
    t = ctx.t
    rt = math.sqrt(t)
    pt = [np.array([1.0])]
    qt = [np.array([0.0])]
    for n in range(1, N + 1):
        shifted = P.polymulx(Qs[n]) - c1 * np.pad(Qs[n], (0, 1))
        p = np.pad(Ps[n], (0, len(shifted) - len(Ps[n])))
        pt.append((t * p + (1.0 - t) * shifted) / rt)
        qt.append(Qs[n] / rt)
    return PolynomialSequence(pt), PolynomialSequence(qt)


@dataclass(frozen=True)
class IntegralEquationProblem:
    """Data of (E_lambda); the derived family parameter is t = 1/(1+lambda)."""

    rho: BaseDensity
    lam: float
    g: Callable

    def __post_init__(self):
        if self.lam == -1.0:
            raise InvalidParameter("lambda = -1 leaves no derived parameter")

    @property
    def t(self) -> float:
        return 1.0 / (1.0 + self.lam)


def solve_integral_equation(problem: IntegralEquationProblem, x,
                            spec: IntegrationSpec = DEFAULT_SPEC):
    """Closed-form solution f = g - (lambda/(1+lambda))(x-c_1) T_{rho_t}(g)."""
    t = problem.t
    if t <= 0:
        raise InvalidParameter(
            f"lambda={problem.lam:g} gives t={t:g}, not a family parameter")
    dens = family(problem.rho, t, spec)
    shape = np.shape(x)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = _as_values(problem.g, xs)
    if problem.lam != 0.0:
        tv = np.atleast_1d(apply_T(dens, problem.g, xs, spec))
        out = out - problem.lam * t * (xs - dens.c1) * tv
    return float(out[0]) if shape == () else out.reshape(shape)


def residual_check(problem: IntegralEquationProblem, f: Callable,
                   spec: IntegrationSpec = DEFAULT_SPEC,
                   provenance: str = "derived") -> VerificationReport:
    """Plug f into (E_lambda) on a 30-point grid; residual must be < 1e-5."""
    with timer() as tm:
        interval = problem.rho.interval
        c1 = moment(problem.rho, 1, spec)
        pad = 2e-3 * interval.width
        grid = np.linspace(interval.a + pad, interval.b - pad, 30)
        lhs = _as_values(f, grid)
        if problem.lam != 0.0:
            lhs = lhs + problem.lam * (grid - c1) * np.atleast_1d(
                apply_T(problem.rho, f, grid, spec))
        dev = float(np.max(np.abs(lhs - _as_values(problem.g, grid))))
    return property_report(
        f"integral-equation residual {problem.rho.name} lambda={problem.lam:g}",
        dev, 1e-5, provenance, tm.ms)


def shift_multiply(f: Callable, c1: float) -> Callable:
    """The multiplication operator f(x) -> (x - c_1) f(x)."""

    def shifted(x):
        x = np.asarray(x, dtype=float)
        return (x - c1) * np.asarray(_call(f, x), dtype=float)

    return shifted


def _interior_grid(rho: BaseDensity, n: int) -> np.ndarray:
    pad = 2e-3 * rho.interval.width
    return np.linspace(rho.interval.a + pad, rho.interval.b - pad, n)


def barycentric_check(rho: BaseDensity, t: float, s: float, f: Callable,
                      spec: IntegrationSpec = DEFAULT_SPEC,
                      provenance: str = "derived") -> VerificationReport:
    """T_{rho_t}(T_{rho_s}((x-c_1) f)) vs [s T_{rho_s}(f) - t T_{rho_t}(f)]/(s-t).

    Compared on a 20-point interior grid with tolerance 1e-5.
    """
    if t == s:
        raise InvalidParameter("barycentric identity needs t != s")
    with timer() as tm:
        dens_t = family(rho, t, spec)
        dens_s = family(rho, s, spec)
        sf = shift_multiply(f, dens_t.c1)
        grid = _interior_grid(rho, 20)

        def inner(u):
            return np.atleast_1d(apply_T(dens_s, sf, u, spec))

        left = np.atleast_1d(apply_T(dens_t, inner, grid, spec))
        right = (s * np.atleast_1d(apply_T(dens_s, f, grid, spec))
                 - t * np.atleast_1d(apply_T(dens_t, f, grid, spec))) / (s - t)
        dev = float(np.max(np.abs(left - right)))
    return property_report(f"barycentric {rho.name} t={t:g} s={s:g}",
                           dev, 1e-5, provenance, tm.ms)


def composition_check(rho: BaseDensity, t: float, s: float, f: Callable,
                      spec: IntegrationSpec = DEFAULT_SPEC,
                      provenance: str = "derived") -> VerificationReport:
    """V over rho_t at s, composed with V at t, vs the single step at t*s."""
    with timer() as tm:
        ctx_t = make_context(rho, t, spec)
        ctx_ts = make_context(rho, t * s, spec)
        ctx_s = make_context(ctx_t.rho_t, s, spec)
        grid = _interior_grid(rho, 20)

        def vf(x):
            return np.atleast_1d(apply_V(ctx_t, f, x, spec))

        left = np.atleast_1d(apply_V(ctx_s, vf, grid, spec))
        right = np.atleast_1d(apply_V(ctx_ts, f, grid, spec))
        dev = float(np.max(np.abs(left - right)))
    return property_report(f"composition {rho.name} t={t:g} s={s:g}",
                           dev, 1e-5, provenance, tm.ms)


def transform_relation_check(rho: BaseDensity, t: float, s: float, z,
                             spec: IntegrationSpec = DEFAULT_SPEC,
                             provenance: str = "derived") -> VerificationReport:
    """(z-c_1) S^t(z) S^s(z) vs [t S^t(z) - s S^s(z)]/(t-s), tolerance 1e-8."""
    if t == s:
        raise InvalidParameter("transform relation needs t != s")
    with timer() as tm:
        z = complex(z)
        c1 = moment(rho, 1, spec)
        st = family_transform(rho, t, z, spec)
        ss = family_transform(rho, s, z, spec)
        dev = abs((z - c1) * st * ss - (t * st - s * ss) / (t - s))
    return property_report(
        f"transform-relation {rho.name} t={t:g} s={s:g} z={z}",
        dev, 1e-8, provenance, tm.ms)
