import math

import numpy as np
import pytest

from sbtoeplitz import DivergenceError
from sbtoeplitz import twisted as tw
from sbtoeplitz.core import DecayBudget, GaussY, One, RadialProfile, SpaceParams


@pytest.mark.parametrize("n", [1, 2])
def test_identity37_kappa(n):
    ks = [tw.verify_identity_37(SpaceParams(n, t), 20) for t in (0.1, 0.25, 0.5)]
    for r in ks:
        assert r.max_rel_err <= 1e-10
        np.testing.assert_allclose(r.kappa.kappa, 4.0 ** -n, rtol=1e-12)


def test_identity_symbol_diag_seq():
    for n in (1, 2):
        np.testing.assert_allclose(tw.diag_seq(One(), SpaceParams(n, 0.25), 30).values, 1.0,
                                   atol=1e-12)


@pytest.mark.parametrize("t", [0.2, 0.25, 0.5])
@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
def test_diag_seq_gaussian_ratio(t, a):
    # for g0 = e^{-a |y|^2}: ratio e^{-4t} (b+2)/b with b = coth(2t) - 1 + a
    b = 1 / math.tanh(2 * t) - 1 + a
    v = tw.diag_seq(GaussY(a), SpaceParams(1, t), 15).values
    np.testing.assert_allclose(v[1:] / v[:-1], math.exp(-4 * t) * (b + 2) / b, rtol=1e-10)


def test_diag_seq_divergence():
    t = 0.25
    rate = 1 / math.tanh(2 * t) - 1
    with pytest.raises(DivergenceError):
        tw.diag_seq(RadialProfile(np.ones_like, DecayBudget(1.5 * rate)), SpaceParams(1, t), 5)


@pytest.mark.parametrize("xu", [(0.0, 0.0), (1.0, 0.0), (0.5, 0.5)])
def test_lemma43(xu):
    for t in (0.25, 0.5):
        for k in range(5):
            assert tw.verify_lemma_43(SpaceParams(1, t), k, *xu).rel_err <= 1e-8


def test_translation_composition():
    # tau(a,0) tau(0,b) = e^{-iab/2} tau(a,b)
    f = lambda z, w: np.exp(-(z ** 2 + w ** 2)) * (1 + z * w)
    a, b = 0.7, -0.4
    z = np.array([0.1, 0.3 + 0.2j, -1.0])
    w = np.array([0.5, -0.2, 0.4j])
    lhs = tw.twisted_translate(a, 0.0, tw.twisted_translate(0.0, b, f))(z, w)
    rhs = np.exp(-0.5j * a * b) * tw.twisted_translate(a, b, f)(z, w)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-14)


def test_isometry_constant_is_kappa():
    err = tw.isometry_check(SpaceParams(1, 0.25), [(0, 0), (1, 0), (2, 1)])
    assert err <= 1e-6


def test_diagonality():
    d = tw.diagonality_check(GaussY(1.0), SpaceParams(1, 0.25), max_index=1)
    assert d.off_diagonal_max <= 1e-6
    assert d.diagonal_rel_err <= 1e-5
    assert d.matrix.shape == (4, 4)


def test_invariance_and_control():
    P = SpaceParams(1, 0.25)
    assert tw.invariance_check_48(GaussY(1.0), P, (0.5, 0.3)) <= 1e-4
    x_dep = lambda x, y, u, v: np.exp(-(x * x + y * y + v * v))
    assert tw.invariance_check_48(x_dep, P, (0.5, 0.3), m=24) > 1e-2


@pytest.mark.parametrize("coeffs", [{(0, 0): 1.0}, {(0, 1): 1.0, (1, 0): 0.5j}])
def test_gutzmer_twisted(coeffs):
    for y, v in ((0.0, 0.0), (0.3, -0.2)):
        lhs, rhs = tw.gutzmer_twisted_n1(coeffs, y, v)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-3)
