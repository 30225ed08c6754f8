import math

import numpy as np
import pytest
from scipy import integrate, special

from sbtoeplitz import RangeError, specfun
from sbtoeplitz.core import GaussRadial, PolyGaussRadial


def test_laguerre_matches_scipy():
    for k, a, x in [(0, 0.0, 1.0), (7, 1.0, 3.3), (25, 0.0, 12.0), (50, 3.0, 0.1)]:
        np.testing.assert_allclose(specfun.laguerre(k, a, x).to_float(),
                                   special.eval_genlaguerre(k, a, x), rtol=1e-11)


def test_laguerre_extended_range():
    # L_k(x) for huge x grows like x^k / k!; the scaled value keeps the log
    v = specfun.laguerre(400, 0.0, 1e7)
    ref = 400 * math.log(1e7) - special.gammaln(401)
    assert not np.isfinite(special.eval_laguerre(400, 1e7))
    np.testing.assert_allclose(v.log_abs(), ref, rtol=1e-5)


def test_laguerre_range_error():
    with pytest.raises(RangeError):
        specfun.laguerre(-1, 0.0, 1.0)


def test_normalized_laguerre_orthonormal():
    # int |l_k|^2 r dr times 2 over the half line is 1
    for n in (1, 2):
        for k in (0, 3, 9):
            val, _ = integrate.quad(lambda r: specfun.normalized_laguerre(k, n, r) ** 2 * r ** (2 * n - 1) /
                                    r ** (2 * (n - 1)) * 2, 0, 40, limit=200)
            np.testing.assert_allclose(val, 1.0, rtol=1e-9)


def test_hermite_fn_orthonormal():
    x, w = np.polynomial.hermite.hermgauss(80)
    rows = specfun.hermite_fn_rows_at(10, x).real * np.exp(x * x / 2)
    gram = (rows * w) @ rows.T
    np.testing.assert_allclose(gram, np.eye(11), atol=1e-12)


def test_hermite_fn_complex_extension():
    z = 0.4 + 0.9j
    k = 5
    norm = 1.0 / math.sqrt(2.0 ** k * math.factorial(k) * math.sqrt(math.pi))
    h = np.polynomial.hermite.hermval(z, [0] * k + [1])
    ref = norm * h * np.exp(-z * z / 2)
    np.testing.assert_allclose(specfun.hermite_fn(k, z), ref, rtol=1e-13)


def test_heat_q_normalized():
    for s in (0.1, 1.0):
        val, _ = integrate.quad(lambda x: specfun.heat_q(s, x), -np.inf, np.inf)
        np.testing.assert_allclose(val, 1.0, rtol=1e-10)


def test_heat_flow_gaussian_closed_form():
    # gauss-radial is e^{-a|x|^2/2}; with b = a/2,
    # e^{-b|x|^2} * q_s = (1+4bs)^{-d/2} e^{-b|x|^2/(1+4bs)}
    a, s = 1.0, 0.3
    b = a / 2
    p = np.array([[0.5, -0.2], [1.3, 0.4]])
    got = specfun.heat_flow(GaussRadial(a), s, p)
    r2 = np.sum(p ** 2, axis=1)
    ref = (1 + 4 * b * s) ** -1 * np.exp(-b * r2 / (1 + 4 * b * s))
    np.testing.assert_allclose(np.real(got), ref, rtol=1e-10)


def test_heat_flow_routes_agree():
    g = PolyGaussRadial(2, 1.0)
    p = np.array([[0.3, 0.1], [1.0, -0.5]])
    a = specfun.heat_flow(g, 0.2, p, method="auto")
    b = specfun.heat_flow(g, 0.2, p, method="quadrature")
    np.testing.assert_allclose(np.real(a), np.real(b), rtol=1e-8)


def test_special_hermite_at_real_points():
    # Fourier-Wigner definition evaluated by adaptive quadrature
    alpha, beta, x, u = 2, 1, 0.7, -0.4

    def integrand(xi, part):
        phi_a = specfun.hermite_fn(alpha, xi + u / 2).real
        phi_b = specfun.hermite_fn(beta, xi - u / 2).real
        val = np.exp(1j * x * xi) * phi_a * phi_b / math.sqrt(2 * math.pi)
        return val.real if part == 0 else val.imag

    ref = complex(integrate.quad(integrand, -20, 20, args=(0,))[0],
                  integrate.quad(integrand, -20, 20, args=(1,))[0])
    np.testing.assert_allclose(complex(specfun.special_hermite_fn(alpha, beta, x, u)), ref,
                               rtol=1e-10, atol=1e-13)
