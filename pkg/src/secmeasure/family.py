"""The one-parameter family rho_t of densities equi-normal with rho.

Every member shares the normalized secondary measure of rho (its own
secondary measure is t*mu) and the mean c_1.  Pointwise,

    rho_t(x) = t rho(x) / ([(t-1)(x-c_1) phi(x)/2 - t]^2
                           + pi^2 rho^2(x) (t-1)^2 (x-c_1)^2),

and the Stieltjes transforms are related homographically,
S_t = S / (t + (1-t)(z-c_1) S).  Parameters t in (0,1] always produce a
probability density; larger t are screened empirically: a real root of the
transform denominator outside the support, or a mass defect of the
candidate density, marks the parameter invalid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DenominatorZero, DomainError, InvalidParameter
from .measures import BaseDensity, moment
from .quadrature import DEFAULT_SPEC, IntegrationSpec, Interval, _call
from .report import VerificationReport, property_report, timer
from .stieltjes import (_phi_values, reducer, secondary_measure,
                        stieltjes_transform)

__all__ = [
    "FamilyParameter",
    "FamilyDensity",
    "family",
    "validate_parameter",
    "family_density",
    "family_transform",
    "moment0_curve",
    "denominator_root_scan",
    "equi_normality_check",
    "dirac_limit_check",
]

# Empirical screen for t > 1: real-axis root scan over this many widths on
# both sides of the support, plus a unit-mass check.
_SCAN_OFFSET = 1e-3
_SCAN_SPAN = 10.0
_SCAN_POINTS = 200
_MASS_TOL = 1e-6
_BRACKET_WIDTH = 1e-10


@dataclass
class FamilyParameter:
    """Family parameter with its validity status.

    validity is "proven" (t <= 1), "empirical" (t > 1, screen passed),
    "invalid" (screen failed), or "unchecked" (t > 1, not yet screened).
    """

    t: float
    validity: str

    def __post_init__(self):
        if self.t <= 0:
            raise InvalidParameter(f"family parameter must be positive, got {self.t}")
        if self.validity not in ("proven", "empirical", "invalid", "unchecked"):
            raise ValueError(f"unknown validity {self.validity!r}")


class FamilyDensity(BaseDensity):
    """The density rho_t built pointwise from rho and its reducer."""

    def __init__(self, base: BaseDensity, param: FamilyParameter,
                 spec: IntegrationSpec = DEFAULT_SPEC):
        super().__init__(base.interval, f"{base.name}|t={param.t:g}")
        self.base = base
        self.param = param
        self.spec = spec
        self.c1 = moment(base, 1, spec)

    @property
    def t(self) -> float:
        return self.param.t

    def value_at(self, x, dleft, dright):
        shape = np.shape(x)
        x = np.atleast_1d(np.asarray(x, dtype=float))
        dleft = np.atleast_1d(np.asarray(dleft, dtype=float))
        dright = np.atleast_1d(np.asarray(dright, dtype=float))
        rho = np.asarray(self.base.value_at(x, dleft, dright), dtype=float)
        t = self.param.t
        if t == 1.0:
            return rho.reshape(shape)
        phi = _phi_values(self.base, x, dleft, dright, self.spec)
        shift = x - self.c1
        bracket = 0.5 * (t - 1.0) * shift * phi - t
        den = bracket ** 2 + (math.pi * rho * (t - 1.0) * shift) ** 2
        return (t * rho / den).reshape(shape)

    def __repr__(self):
        return (f"FamilyDensity({self.base.name!r}, t={self.t:g}, "
                f"{self.param.validity})")


def _raw_family(rho: BaseDensity, t: float,
                spec: IntegrationSpec = DEFAULT_SPEC) -> FamilyDensity:
    key = (t, spec.rel_tol)
    dens = rho._family.get(key)
    if dens is None:
        validity = "proven" if t <= 1.0 else "unchecked"
        dens = FamilyDensity(rho, FamilyParameter(t, validity), spec)
        rho._family[key] = dens
    return dens


def _screen_parameter(rho: BaseDensity, dens: FamilyDensity,
                      spec: IntegrationSpec) -> FamilyParameter:
    a, b = rho.interval.a, rho.interval.b
    w = rho.interval.width
    t = dens.t
    right = Interval(b + _SCAN_OFFSET * w, b + _SCAN_SPAN * w)
    left = Interval(a - _SCAN_SPAN * w, a - _SCAN_OFFSET * w)
    roots = (denominator_root_scan(rho, t, right, _SCAN_POINTS, spec)
             + denominator_root_scan(rho, t, left, _SCAN_POINTS, spec))
    mass_ok = abs(dens.mass(spec) - 1.0) < _MASS_TOL
    ok = not roots and mass_ok
    return FamilyParameter(t, "empirical" if ok else "invalid")


def family(rho: BaseDensity, t: float, spec: IntegrationSpec = DEFAULT_SPEC,
           require_valid: bool = True) -> FamilyDensity:
    """The density rho_t, validated per the runtime validity policy.

    t <= 1 is accepted outright; t > 1 is screened by a real-axis root
    scan of the transform denominator plus a unit-mass check.
    """
    dens = _raw_family(rho, t, spec)
    if dens.param.validity == "unchecked":
        dens.param = _screen_parameter(rho, dens, spec)
    if require_valid and dens.param.validity == "invalid":
        raise InvalidParameter(
            f"t={t:g} fails the validity screen for {rho.name!r}")
    return dens


def validate_parameter(rho: BaseDensity, t: float,
                       spec: IntegrationSpec = DEFAULT_SPEC) -> FamilyParameter:
    """Validity status of a family parameter (proven/empirical/invalid)."""
    return family(rho, t, spec, require_valid=False).param


def family_density(rho: BaseDensity, t: float, x,
                   spec: IntegrationSpec = DEFAULT_SPEC):
    """rho_t(x); evaluable for any t > 0, validated or not."""
    return _raw_family(rho, t, spec).value(x)


def family_transform(rho: BaseDensity, t: float, z,
                     spec: IntegrationSpec = DEFAULT_SPEC) -> complex:
    """S_{rho_t}(z) = S(z) / (t + (1-t)(z-c_1) S(z))."""
    if t <= 0:
        raise InvalidParameter(f"family parameter must be positive, got {t}")
    z = complex(z)
    s = stieltjes_transform(rho, z, spec)
    c1 = moment(rho, 1, spec)
    den = t + (1.0 - t) * (z - c1) * s
    if abs(den) < 1e-12 * max(1.0, abs(t)):
        raise DenominatorZero(
            f"transform denominator vanished at z={z} for t={t:g}")
    return s / den


def moment0_curve(rho: BaseDensity, t: float,
                  spec: IntegrationSpec = DEFAULT_SPEC) -> float:
    """f(t) = int rho_t; equals 1 exactly when t is a valid parameter."""
    return _raw_family(rho, t, spec).mass(spec)


def denominator_root_scan(rho: BaseDensity, t: float, search: Interval,
                          grid_points: int = _SCAN_POINTS,
                          spec: IntegrationSpec = DEFAULT_SPEC):
    """Real roots of D(x) = t + (1-t)(x-c_1) S(x) on a grid off the support.

    Returns bisection-refined brackets of width 1e-10; an empty list
    certifies the absence of a sign change on the grid.
    """
    interval = rho.interval
    if not (search.b <= interval.a or search.a >= interval.b):
        raise DomainError("root-scan interval must be disjoint from the support")
    if grid_points < 2:
        raise ValueError("need at least two grid points")
    c1 = moment(rho, 1, spec)

    def D(x: float) -> float:
        s = stieltjes_transform(rho, x, spec).real
        return t + (1.0 - t) * (x - c1) * s

    xs = np.linspace(search.a, search.b, grid_points)
    vals = np.array([D(x) for x in xs])
    brackets = []
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        lo, hi = xs[i], xs[i + 1]
        flo = vals[i]
        while hi - lo > _BRACKET_WIDTH:
            mid = 0.5 * (lo + hi)
            fmid = D(mid)
            if fmid == 0.0:
                lo, hi = mid - 0.5 * _BRACKET_WIDTH, mid + 0.5 * _BRACKET_WIDTH
                break
            if flo * fmid < 0:
                hi = mid
            else:
                lo, flo = mid, fmid
        brackets.append((float(lo), float(hi)))
    return brackets


def equi_normality_check(rho: BaseDensity, t: float,
                         spec: IntegrationSpec = DEFAULT_SPEC) -> VerificationReport:
    """Verify that the secondary measure of rho_t is t times that of rho.

    Checks the pointwise identity mu_t = t*mu on a 30-point interior grid
    (tolerance 1e-4) and the moment identity c'_2 - c'_1^2 = t (c_2 - c_1^2)
    (tolerance 1e-6); both must hold to pass.
    """
    with timer() as tm:
        dens = family(rho, t, spec, require_valid=False)
        sm = secondary_measure(rho, spec)
        sm_t = secondary_measure(dens, spec)
        interval = rho.interval
        pad = 2e-3 * interval.width
        grid = np.linspace(interval.a + pad, interval.b - pad, 30)
        dev_grid = float(np.max(np.abs(sm_t.mu(grid) - t * sm.mu(grid))))
        dev_moment = abs(sm_t.d0 - t * sm.d0)
    passed = dev_grid <= 1e-4 and dev_moment <= 1e-6
    rep = property_report(f"equi-normality {rho.name} t={t:g}",
                          max(dev_grid, dev_moment), 1e-4, "paper", tm.ms)
    return VerificationReport(rep.check_id, rep.expected, rep.computed,
                              rep.tolerance, rep.provenance, passed, tm.ms)


def _default_t_ladder():
    return (0.2, 0.1, 0.05, 0.02)


def dirac_limit_check(rho: BaseDensity, g: Callable,
                      t_ladder: Optional[Sequence[float]] = None,
                      spec: IntegrationSpec = DEFAULT_SPEC) -> VerificationReport:
    """Verify that rho_t converges weakly to the point mass at c_1 as t -> 0.

    Along a decreasing t ladder, int g rho_t must approach g(c_1) with
    non-increasing error and a final gap below 5e-2, and the reducer of
    rho_t must trend toward 2/(x - c_1) at two fixed interior points.
    """
    ladder = tuple(_default_t_ladder() if t_ladder is None else t_ladder)
    if len(ladder) < 2 or any(x <= 0 for x in ladder) or \
            any(b >= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("t ladder must be >= 2 decreasing positive values")
    with timer() as tm:
        c1 = moment(rho, 1, spec)
        target = float(np.asarray(_call(g, np.asarray([c1])))[0])
        gaps = []
        interval = rho.interval
        probes = [c1 + 0.3 * interval.width, c1 - 0.3 * interval.width]
        probes = [x for x in probes
                  if interval.a + 1e-3 * interval.width < x
                  < interval.b - 1e-3 * interval.width]
        probe_gaps = []
        for t in ladder:
            dens = family(rho, t, spec)
            gaps.append(abs(float(dens.weighted_integral(g, spec).real) - target))
            probe_gaps.append(max(abs(reducer(dens, x, spec) - 2.0 / (x - c1))
                                  for x in probes))
        monotone = all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))
        trending = probe_gaps[-1] <= probe_gaps[0] + 1e-12
    passed = monotone and trending and gaps[-1] < 5e-2
    rep = property_report(f"dirac-limit {rho.name}", gaps[-1], 5e-2,
                          "paper", tm.ms)
    return VerificationReport(rep.check_id, rep.expected, rep.computed,
                              rep.tolerance, rep.provenance, passed, tm.ms)
