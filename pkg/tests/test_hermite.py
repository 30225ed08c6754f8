import math

import numpy as np
import pytest

from sbtoeplitz import BOUNDED, UNBOUNDED, specfun
from sbtoeplitz import hermite_bergman as hb
from sbtoeplitz.core import GaussH, GaussRadial, SpaceParams

P = SpaceParams(1, 0.25)


def test_mehler_kernel_matches_eigen_series():
    # K_t(z, w) = sqrt(2 pi) sum_k e^{-2(2k+1)t} Phi_k(z) conj(Phi_k(w))
    z, w = 0.4 + 0.3j, -0.2 + 0.5j
    k = np.arange(80)
    rz = specfun.hermite_fn_rows_at(79, np.array([z]))[:, 0]
    rw = specfun.hermite_fn_rows_at(79, np.array([w]))[:, 0]
    series = math.sqrt(2 * math.pi) * np.sum(np.exp(-2 * (2 * k + 1) * 0.25) * rz * np.conj(rw))
    np.testing.assert_allclose(specfun.mehler_kernel_K(P, z, w), series, rtol=1e-13)
    # Hermitian symmetry
    np.testing.assert_allclose(specfun.mehler_kernel_K(P, w, z),
                               np.conj(specfun.mehler_kernel_K(P, z, w)), rtol=1e-14)


def test_reproducing_constant():
    for t in (0.1, 0.25, 0.5):
        np.testing.assert_allclose(hb.reproducing_constant(t), 4 * math.pi, rtol=1e-10)


@pytest.mark.parametrize("z", [0.0, 0.5 + 0.3j, -1.2 + 1.1j])
def test_berezin_routes(z):
    r = hb.berezin(GaussRadial(1.0), P, z)
    assert r.rel_err < 1e-8


def test_semigroup_xy():
    for z in (0.0, 0.3 + 0.1j, -1.0 + 0.8j):
        lhs, rhs = hb.semigroup_xy(GaussRadial(1.0), P, z)
        np.testing.assert_allclose(complex(rhs), complex(lhs), rtol=1e-8)


@pytest.mark.parametrize("alpha", np.linspace(-1.0, 0.5, 7))
@pytest.mark.parametrize("t", [0.1, 0.3, 0.5])
def test_example36_sign_test(alpha, t):
    ex = hb.example36(alpha, t)
    expected = BOUNDED if ex.sign_test >= 0 else UNBOUNDED
    assert ex.verdict == expected
    rep, _ = hb.example36_sequence(alpha, t, 14)
    v = rep.values
    np.testing.assert_allclose(v[1:] / v[:-1], ex.ratio, rtol=1e-8)


def test_example36_beta_solves_constraint():
    for a in (-0.3, 0.2, 0.7):
        t = 0.2
        b = hb.example36_beta(a, t)
        c, th = 1 / math.tanh(2 * t), math.tanh(2 * t)
        np.testing.assert_allclose(a * c - b * th, a * b, rtol=1e-13)


def test_radiality_on_and_off_curve():
    t = 0.25
    for a in (-0.1, 0.1, 0.3):
        b = hb.example36_beta(a, t).real
        assert hb.radiality_check(hb.remark38_profile(a, b, t), [0.3, 0.8, 1.5]).is_radial
        assert not hb.radiality_check(hb.remark38_profile(a, 1.1 * b, t), [0.3, 0.8, 1.5]).is_radial


@pytest.mark.parametrize("c", [1.5, 3.0])
def test_multiplier_from_gaussian_h(c):
    hm = hb.multiplier_from_h(GaussH(c), P, 12)
    expected = math.exp(-4 * P.t) * (c + 1) / (c - 1)
    np.testing.assert_allclose(hm.ratios(), expected, rtol=1e-10)


@pytest.mark.parametrize("coeffs", [[(0, 1.0)], [(1, 1.0), (3, 0.5j)], [(0, 0.3), (2, -0.7)]])
def test_gutzmer_hermite(coeffs):
    for y, v in ((0.0, 0.0), (0.5, -0.3), (-1.0, 1.0)):
        lhs, rhs = hb.gutzmer_hermite_n1(coeffs, y, v)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-4)
