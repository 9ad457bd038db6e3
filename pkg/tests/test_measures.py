import math

import numpy as np
import pytest

from secmeasure import (CATALOG_NAMES, DEFAULT_SPEC, Interval, InvalidDensity,
                        UnknownDensity, catalog, inner_product, mean_project,
                        moment, moments, user_density)
from secmeasure.quadrature import EndpointExponents


def test_catalog_names_and_unknown():
    assert set(CATALOG_NAMES) == {"cheb-u", "cheb-t", "uniform", "linear2x",
                                  "sqrt32"}
    with pytest.raises(UnknownDensity):
        catalog("gauss")


def test_catalog_is_cached(cheb_u):
    assert catalog("cheb-u") is cheb_u


def test_masses_are_one(all_catalog, spec):
    for rho in all_catalog:
        assert abs(rho.mass(spec) - 1.0) < 1e-12


def test_pointwise_values(cheb_u, cheb_t, uniform, linear2x, sqrt32):
    assert abs(cheb_u.value(0.0) - 2.0 / math.pi) < 1e-15
    assert abs(cheb_t.value(0.0) - 1.0 / math.pi) < 1e-15
    assert uniform.value(0.3) == 1.0
    assert abs(linear2x.value(0.3) - 0.6) < 1e-15
    assert abs(sqrt32.value(0.25) - 0.75) < 1e-15


def test_moments_closed_forms(cheb_u, uniform, spec):
    # uniform on [0,1]: c_n = 1/(n+1)
    ms = moments(uniform, 6, spec)
    for n in range(7):
        assert abs(ms[n] - 1.0 / (n + 1)) < 1e-12
    # semicircle weight: c_{2k} = Catalan(k)/4^k, odd moments vanish
    catalan = [1, 1, 2, 5]
    for k in range(4):
        assert abs(moment(cheb_u, 2 * k, spec) - catalan[k] / 4.0 ** k) < 1e-12
        assert abs(moment(cheb_u, 2 * k + 1, spec)) < 1e-12


def test_moment_cache_and_validation(uniform, spec):
    assert moment(uniform, 3, spec) == moment(uniform, 3, spec)
    with pytest.raises(ValueError):
        moment(uniform, -1, spec)


def test_hankel_positive(uniform, spec):
    ms = moments(uniform, 6, spec)
    H = np.array([[ms[i + j] for j in range(4)] for i in range(4)])
    assert np.all(np.linalg.eigvalsh(H) > 0)


def test_user_density_renormalizes(spec):
    # mass 1.005, within the renormalization window
    rho = user_density(lambda x: 1.005 * np.ones_like(x), Interval(0.0, 1.0),
                       spec=spec)
    assert abs(rho.mass(spec) - 1.0) < 1e-10


def test_user_density_rejects_bad_mass(spec):
    with pytest.raises(InvalidDensity):
        user_density(lambda x: 2.0 * np.ones_like(x), Interval(0.0, 1.0),
                     spec=spec)


def test_user_density_rejects_negative(spec):
    with pytest.raises(InvalidDensity):
        user_density(lambda x: np.asarray(x, dtype=float), Interval(-1.0, 1.0),
                     spec=spec)


def test_user_density_with_exponents(spec):
    # 3/2 sqrt(x) expressed as exponents + constant smooth part
    rho = user_density(lambda x: 1.5 * np.ones_like(x), Interval(0.0, 1.0),
                       EndpointExponents(0.5, 0.0), spec=spec)
    assert abs(rho.mass(spec) - 1.0) < 1e-12
    assert abs(rho.value(0.25) - 0.75) < 1e-14


def test_inner_product_orthogonality(cheb_u, spec):
    # U_1(x) = 2x and U_2(x) = 4x^2 - 1 are orthonormal for the semicircle
    u1 = lambda x: 2.0 * np.asarray(x, dtype=float)
    u2 = lambda x: 4.0 * np.asarray(x, dtype=float) ** 2 - 1.0
    assert abs(inner_product(u1, u1, cheb_u, spec) - 1.0) < 1e-12
    assert abs(inner_product(u1, u2, cheb_u, spec)) < 1e-12


def test_mean_project(uniform, spec):
    f = mean_project(lambda x: np.asarray(x, dtype=float) ** 2, uniform, spec)
    assert abs(f.mean - 1.0 / 3.0) < 1e-12
    assert abs(float(uniform.weighted_integral(
        lambda x: np.atleast_1d(f(x)), spec).real)) < 1e-12


def test_weighted_integral(sqrt32, spec):
    # int_0^1 (3/2) sqrt(x) * x dx = 3/5
    val = sqrt32.weighted_integral(
        lambda x: np.asarray(x, dtype=float), spec)
    assert abs(float(val.real) - 0.6) < 1e-12
