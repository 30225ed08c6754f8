import math

import numpy as np
import pytest
from scipy import special

from sbtoeplitz import BOUNDED, DivergenceError, UNBOUNDED, fock
from sbtoeplitz.core import Annulus, GaussRadial, GaussY, One, PolyGaussRadial


def _poly_gauss_closed(p, a, n, k):
    # int r^{p+2k+2n-1} e^{-(1+a) r^2/2} / int r^{2k+2n-1} e^{-r^2/2}
    m = k + n
    return math.exp(special.gammaln(m + p / 2) - special.gammaln(m)
                    + (p / 2) * math.log(2.0) - (m + p / 2) * math.log(1 + a))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gauss_radial_closed_form(n):
    a = 0.7
    v = fock.radial_seq_direct(GaussRadial(a), n, 40).values.real
    ref = (1 + a) ** -(np.arange(41) + n)
    np.testing.assert_allclose(v, ref, rtol=1e-11)


@pytest.mark.parametrize("n", [1, 2])
def test_poly_gauss_closed_form(n):
    v = fock.radial_seq_direct(PolyGaussRadial(4, 0.5), n, 25).values.real
    ref = [_poly_gauss_closed(4, 0.5, n, k) for k in range(26)]
    np.testing.assert_allclose(v, ref, rtol=1e-11)


def test_annulus_incomplete_gamma():
    for n in (1, 2):
        v = fock.radial_seq_direct(Annulus(1.0, 2.0), n, 20).values.real
        k = np.arange(21) + n
        ref = special.gammainc(k, 2.0) - special.gammainc(k, 0.5)
        np.testing.assert_allclose(v, ref, rtol=1e-11)


def test_routes_agree_for_gaussians():
    for g in (GaussRadial(1.0), PolyGaussRadial(2, 1.0)):
        for n in (1, 2):
            a = fock.radial_seq_direct(g, n, 20).values
            b = fock.radial_seq_heatflow(g, n, 20).values
            np.testing.assert_allclose(b, a, rtol=1e-8)


def test_heatflow_warns_on_cancellation():
    with pytest.warns(RuntimeWarning, match="from k = 16"):
        fock.radial_seq_heatflow(Annulus(1.0, 2.0), 1, 20)


def test_identity_symbol():
    for n in (1, 2):
        np.testing.assert_allclose(fock.radial_seq_direct(One(), n, 30).values, 1.0, atol=1e-12)
        np.testing.assert_allclose(fock.radial_seq_heatflow(One(), n, 30).values, 1.0, atol=1e-10)


def test_verdicts_on_gaussians():
    assert fock.radial_seq_direct(GaussRadial(0.5), 1, 30).verdict == BOUNDED
    # growing symbol e^{+0.3 r^2/2}: eigenvalues (0.7)^{-(k+1)}
    assert fock.radial_seq_direct(GaussRadial(-0.3), 1, 30).verdict == UNBOUNDED


def test_matrix_is_diagonal_for_radial_symbol():
    m = fock.toeplitz_matrix(GaussRadial(1.0), 2, 2)
    e = m.entries
    off = e - np.diag(np.diag(e))
    assert np.max(np.abs(off)) < 1e-14
    assert m.hermitian_defect() < 1e-14
    degrees = [sum(a) for a in m.index_set.indices]
    np.testing.assert_allclose(np.diag(e).real, 2.0 ** -(np.array(degrees) + 2), rtol=1e-12)


def test_zeta_values():
    z = np.array([0.3 + 0.2j, -1.1 + 0.5j])
    alpha = (3, 2)
    ref = z[0] ** 3 * z[1] ** 2 / math.sqrt(2.0 ** 5 * 6 * 2)
    np.testing.assert_allclose(fock.zeta(alpha, z).to_complex(), ref, rtol=1e-14)
    np.testing.assert_allclose(fock.zeta_values(alpha, z[None, :])[0], ref, rtol=1e-14)


def test_cor23_annulus():
    c = fock.cor23_check(Annulus(1.0, 2.0), 1, 30)
    assert c.premise_holds and c.consistent
    assert c.report.verdict == BOUNDED


@pytest.mark.parametrize("beta", [0.0, 1.0])
def test_laguerre_l1_exponent(beta):
    slope, ks, vals = fock.laguerre_l1_exponent(beta, 1)
    assert abs(slope - (0.5 - beta / 2)) <= 0.1


def test_laguerre_l1_diverges():
    with pytest.raises(DivergenceError):
        fock.laguerre_l1_integral(10, 1, 2.0)


def test_multiplier_routes_and_closed_form():
    xi = np.linspace(-2, 2, 9)
    for a in (0.5, 2.0):
        for t in (0.25, 0.5):
            r = fock.heat_bergman_multiplier(GaussY(a), t, xi)
            assert r.discrepancy < 1e-10
            ref = (1 + 2 * t * a) ** -0.5 * np.exp(-a * xi ** 2 / (1 + 2 * t * a))
            np.testing.assert_allclose(r.flow_at_xi, ref, rtol=1e-12)


def test_sesquilinear_identity():
    lhs, rhs = fock.sesquilinear_check(GaussY(1.0), 0.25)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-10)
