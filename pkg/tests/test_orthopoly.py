import math

import numpy as np
import pytest

from secmeasure import moment
from secmeasure.errors import InstabilityDetected
from secmeasure.orthopoly import (PolynomialSequence, RecurrenceCoefficients,
                                  apply_T, orthonormal_polys,
                                  recurrence_coefficients, secondary_polys)


def test_recurrence_cheb_u(cheb_u, spec):
    rc = recurrence_coefficients(cheb_u, 8, spec)
    np.testing.assert_allclose(rc.a, 0.0, atol=1e-13)
    np.testing.assert_allclose(rc.b, 0.5, atol=1e-13)


def test_recurrence_uniform(uniform, spec):
    # shifted Legendre: a_n = 1/2, b_n = n / (2 sqrt(4n^2 - 1))
    rc = recurrence_coefficients(uniform, 6, spec)
    np.testing.assert_allclose(rc.a, 0.5, atol=1e-12)
    expected_b = [n / (2.0 * math.sqrt(4 * n * n - 1.0)) for n in range(1, 6)]
    np.testing.assert_allclose(rc.b, expected_b, atol=1e-12)


def test_recurrence_rejects_shape():
    with pytest.raises(ValueError):
        RecurrenceCoefficients(np.zeros(3), np.zeros(3))


def test_degree_cap(cheb_u, spec):
    with pytest.raises(InstabilityDetected):
        recurrence_coefficients(cheb_u, 25, spec)


def test_orthonormal_polys_are_orthonormal(linear2x, spec):
    rc = recurrence_coefficients(linear2x, 6, spec)
    polys = PolynomialSequence(orthonormal_polys(rc))
    for n in range(6):
        for m in range(n + 1):
            val = float(linear2x.weighted_integral(
                lambda x: polys.eval(n, x) * polys.eval(m, x), spec).real)
            assert abs(val - (1.0 if n == m else 0.0)) < 1e-10


def test_cheb_u_polys_match_chebyshev(cheb_u, spec):
    rc = recurrence_coefficients(cheb_u, 5, spec)
    polys = PolynomialSequence(orthonormal_polys(rc))
    xs = np.linspace(-0.9, 0.9, 9)
    theta = np.arccos(xs)
    for n in range(5):
        u_n = np.sin((n + 1) * theta) / np.sin(theta)
        np.testing.assert_allclose(polys.eval(n, xs), u_n, atol=1e-11)


def test_secondary_polys_start(cheb_u, spec):
    rc = recurrence_coefficients(cheb_u, 5, spec)
    d0 = moment(cheb_u, 2, spec) - moment(cheb_u, 1, spec) ** 2
    Q = PolynomialSequence(secondary_polys(rc, d0))
    xs = np.linspace(-0.9, 0.9, 5)
    np.testing.assert_allclose(Q.eval(0, xs), 0.0, atol=1e-15)
    np.testing.assert_allclose(Q.eval(1, xs), 1.0 / math.sqrt(d0), atol=1e-12)


def test_apply_T_constants_and_linear(uniform, spec):
    # T annihilates constants; T(x) integrates the density, giving 1
    xs = np.linspace(0.05, 0.95, 7)
    np.testing.assert_allclose(
        np.atleast_1d(apply_T(uniform, lambda x: np.ones_like(x), xs, spec)),
        0.0, atol=1e-12)
    np.testing.assert_allclose(
        np.atleast_1d(apply_T(uniform, lambda x: np.asarray(x, float), xs,
                              spec)), 1.0, atol=1e-12)


def test_apply_T_quadratic(uniform, spec):
    # T(x^2)(x) = x + c_1
    xs = np.linspace(0.05, 0.95, 7)
    c1 = moment(uniform, 1, spec)
    got = np.atleast_1d(apply_T(uniform, lambda x: np.asarray(x, float) ** 2,
                                xs, spec))
    np.testing.assert_allclose(got, xs + c1, atol=1e-11)


def test_apply_T_gives_secondary_polys(sqrt32, spec):
    rc = recurrence_coefficients(sqrt32, 5, spec)
    d0 = moment(sqrt32, 2, spec) - moment(sqrt32, 1, spec) ** 2
    P = PolynomialSequence(orthonormal_polys(rc))
    Q = PolynomialSequence(secondary_polys(rc, d0))
    xs = np.linspace(0.05, 0.95, 9)
    for n in range(5):
        got = np.atleast_1d(apply_T(sqrt32, P.as_callable(n), xs, spec))
        np.testing.assert_allclose(got, Q.eval(n, xs), atol=1e-9)


def test_apply_T_scalar_and_complex(cheb_u, spec):
    val = apply_T(cheb_u, lambda x: np.asarray(x, float) ** 2, 0.3, spec)
    assert np.isscalar(val) or np.ndim(val) == 0
    f = lambda x: 1.0 / (np.asarray(x) - 2j)
    got = np.atleast_1d(apply_T(cheb_u, f, np.array([0.1]), spec))
    assert np.iscomplexobj(got)
