import math

import numpy as np
import pytest
from scipy import integrate, special

from sbtoeplitz import quadrature as quad
from sbtoeplitz.core import DecayBudget


@pytest.mark.parametrize("m", [1, 2, 5, 16, 40])
def test_hermite_exact_on_polynomials(m):
    rule = quad.gauss_hermite(m)
    for k in range(0, 2 * m, 2):
        exact = special.gamma((k + 1) / 2)
        np.testing.assert_allclose(rule.integrate(lambda x: x ** k), exact, rtol=1e-12)
    odd = 2 * m - 1
    scale = rule.integrate(lambda x: np.abs(x) ** odd)
    assert abs(rule.integrate(lambda x: x ** odd)) <= 1e-13 * scale


@pytest.mark.parametrize("alpha", [0.0, 0.5, 2.0])
def test_laguerre_exact_on_polynomials(alpha):
    m = 12
    rule = quad.gauss_laguerre(m, alpha)
    for k in range(2 * m):
        exact = special.gamma(k + alpha + 1)
        np.testing.assert_allclose(rule.integrate(lambda x: x ** k), exact, rtol=1e-11)


def test_legendre_matches_scipy():
    rule = quad.gauss_legendre(20, 0.5, 3.0)
    ref, _ = integrate.quad(lambda x: np.cos(x) * np.exp(-x), 0.5, 3.0)
    np.testing.assert_allclose(rule.integrate(lambda x: np.cos(x) * np.exp(-x)), ref, rtol=1e-13)


def test_large_hermite_weights_do_not_underflow():
    rule = quad.gauss_hermite(512)
    assert np.all(np.isfinite(rule.log_weights))
    np.testing.assert_allclose(np.sum(rule.weights), math.sqrt(math.pi), rtol=1e-13)
    np.testing.assert_allclose(rule.compensated_weights()[-1] > 0, True)


def test_integrate_nd_recentered_gaussian():
    rule = quad.TensorRule.hermite(20, 2)
    c = np.array([1.5, -0.7])

    def f(p):
        return np.exp(-2.0 * np.sum((p - c) ** 2, axis=1)) * (1 + p[:, 0] * p[:, 1])

    got = quad.integrate_nd(f, rule, recentering=c, scales=[1 / math.sqrt(2)] * 2)
    ref = (math.pi / 2) * (1 + c[0] * c[1])
    np.testing.assert_allclose(complex(got).real, ref, rtol=1e-12)


def test_radial_integral_against_closed_form():
    # int_0^inf e^{-a r^2} r^{2n-1} dr = (n-1)! / (2 a^n)
    for n in (1, 2, 3):
        a = 1.7
        got = quad.radial_integral(lambda r: np.exp(-a * r * r), DecayBudget(-a), n)
        np.testing.assert_allclose(complex(got).real, math.factorial(n - 1) / (2 * a ** n),
                                   rtol=1e-12)


def test_radial_integral_with_support():
    got = quad.radial_integral(lambda r: np.ones_like(r), DecayBudget(0.0), 1, support=(1.0, 2.0))
    np.testing.assert_allclose(complex(got).real, 1.5, rtol=1e-13)
