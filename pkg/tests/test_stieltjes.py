import math

import numpy as np
import pytest

from secmeasure import (DomainError, ExtrapolationDivergence, PointOnInterval,
                        lerch_phi_half, moment, perron_invert, reducer,
                        secondary_measure, secondary_transform,
                        stieltjes_transform)


def _s_semicircle(z):
    # branch with S ~ 1/z at infinity
    return 2.0 * (z - np.sqrt(z - 1) * np.sqrt(z + 1))


def test_transform_cheb_u_closed_form(cheb_u, spec):
    for z in (2.0, -3.0, 1.5 + 1j, -0.4 + 2j, 10.0):
        z = complex(z)
        assert abs(stieltjes_transform(cheb_u, z, spec)
                   - _s_semicircle(z)) < 1e-12


def test_transform_uniform_closed_form(uniform, spec):
    for z in (2.0, -1.0, 1.2 + 0.5j, 0.5 + 2j):
        z = complex(z)
        assert abs(stieltjes_transform(uniform, z, spec)
                   - np.log(z / (z - 1.0))) < 1e-12


def test_transform_near_cut(cheb_u, spec):
    z = 0.3 + 1e-6j
    assert abs(stieltjes_transform(cheb_u, z, spec)
               - _s_semicircle(z)) < 1e-9


def test_transform_decay_at_infinity(cheb_u, spec):
    z = 1e6
    assert abs(z * stieltjes_transform(cheb_u, z, spec) - 1.0) < 1e-4


def test_point_on_interval(cheb_u, spec):
    with pytest.raises(PointOnInterval):
        stieltjes_transform(cheb_u, 0.3, spec)


def test_reducer_closed_forms(cheb_u, uniform, linear2x, spec):
    xs = np.linspace(-0.9, 0.9, 7)
    np.testing.assert_allclose(reducer(cheb_u, xs, spec), 4.0 * xs, atol=1e-10)
    xu = np.linspace(0.1, 0.9, 7)
    np.testing.assert_allclose(reducer(uniform, xu, spec),
                               2.0 * np.log(xu / (1.0 - xu)), atol=1e-10)
    np.testing.assert_allclose(reducer(linear2x, xu, spec),
                               -4.0 * xu * np.log((1.0 - xu) / xu) - 4.0,
                               atol=1e-10)


def test_reducer_sqrt32_against_series(sqrt32, spec):
    # Lerch Phi(x, 1, -1/2) by direct series summation
    def lerch_series(x, terms=400):
        k = np.arange(terms)
        return float(np.sum(x ** k / (k - 0.5)))

    for x in (0.2, 0.36, 0.7):
        assert abs(lerch_phi_half(x) - lerch_series(x)) < 1e-12
        assert abs(reducer(sqrt32, x, spec) - 3.0 * lerch_series(x)) < 1e-9


def test_lerch_domain():
    with pytest.raises(DomainError):
        lerch_phi_half(1.5)
    with pytest.raises(DomainError):
        lerch_phi_half(0.0)


def test_reducer_domain(cheb_u, spec):
    with pytest.raises(DomainError):
        reducer(cheb_u, 1.0 - 1e-9, spec)
    with pytest.raises(DomainError):
        reducer(cheb_u, 2.0, spec)


def test_secondary_measure_cheb_u(cheb_u, spec):
    # phi = 4x gives mu = rho / 4 and d0 = 1/4
    sm = secondary_measure(cheb_u, spec)
    assert abs(sm.d0 - 0.25) < 1e-12
    xs = np.linspace(-0.9, 0.9, 9)
    np.testing.assert_allclose(sm.mu(xs), cheb_u.value(xs) / 4.0, atol=1e-10)
    np.testing.assert_allclose(sm.mu0(xs), cheb_u.value(xs), atol=1e-9)
    assert abs(sm.mass() - sm.d0) < 1e-10


def test_secondary_measure_mass_matches_variance(all_catalog, spec):
    for rho in all_catalog:
        sm = secondary_measure(rho, spec)
        var = moment(rho, 2, spec) - moment(rho, 1, spec) ** 2
        assert abs(sm.d0 - var) < 1e-12
        assert abs(sm.mass() - var) < 1e-9


def test_secondary_transform_identity(uniform, cheb_u, spec):
    # S_mu(z) = z - c_1 - 1/S_rho(z)
    for rho in (uniform, cheb_u):
        c1 = moment(rho, 1, spec)
        for z in (2.0 + 0.5j, -1.5, 3j):
            z = complex(z)
            s = stieltjes_transform(rho, z, spec)
            assert abs(secondary_transform(rho, z, spec)
                       - (z - c1 - 1.0 / s)) < 1e-10


def test_perron_recovers_density(cheb_u, uniform, spec):
    for rho, xs in ((cheb_u, (-0.5, 0.0, 0.6)), (uniform, (0.2, 0.5, 0.8))):
        S = lambda z, r=rho: stieltjes_transform(r, z, spec)
        for x in xs:
            assert abs(perron_invert(S, x) - rho.value(x)) < 1e-8


def test_perron_divergence_on_pole():
    with pytest.raises(ExtrapolationDivergence):
        perron_invert(lambda z: 1.0 / (z - 0.4), 0.4)


def test_perron_ladder_validation(cheb_u, spec):
    S = lambda z: stieltjes_transform(cheb_u, z, spec)
    with pytest.raises(ValueError):
        perron_invert(S, 0.0, eps_ladder=(1e-3, 1e-2, 1e-1))
    with pytest.raises(ValueError):
        perron_invert(S, 0.0, eps_ladder=(1e-2, 1e-3))
