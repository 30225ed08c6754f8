import math

import numpy as np
import pytest
from scipy import integrate

from sbtoeplitz import BOUNDED, DivergenceError
from sbtoeplitz import compact_group as cg
from sbtoeplitz.core import DecayBudget, GroupGauss, One, RadialProfile


def test_spherical_function_eigen_equation():
    # psi'' + 2 coth(H) psi' = -(lam^2 + 1) psi in rank one with rho = 1
    lam, H, h = 1.7, 0.8, 1e-3
    f = lambda x: cg.spherical_psi(lam, x)
    d1 = (f(H + h) - f(H - h)) / (2 * h)
    d2 = (f(H + h) - 2 * f(H) + f(H - h)) / h ** 2
    np.testing.assert_allclose(d2 + 2 / math.tanh(H) * d1, -(lam ** 2 + 1) * f(H), rtol=1e-5)


def test_spherical_function_near_origin():
    np.testing.assert_allclose(cg.spherical_psi(2.0, 0.0), 1.0, rtol=1e-15)
    np.testing.assert_allclose(cg.spherical_psi(2.0, 1e-6), 1.0, rtol=1e-10)


def test_c_function():
    np.testing.assert_allclose(cg.c_function(2.0), 1 / 2j, rtol=1e-15)


def test_dual_heat_gamma_normalization():
    # the defining relation fixes the constant to 1
    for t in (0.25, 0.5):
        rel = cg.defining_relation(cg.RankOneModel(1.0, 1.0, t), np.arange(1, 11) * 0.5)
        assert rel.spread <= 1e-10
        np.testing.assert_allclose(rel.constant, 1.0, rtol=1e-10)


def test_defining_relation_needs_even_rule():
    with pytest.raises(ValueError):
        cg.defining_relation(cg.RankOneModel(), [1.0], m=63)


@pytest.mark.parametrize("b", [0.5, 1.0, 2.0])
def test_multiplier_closed_form(b):
    model = cg.RankOneModel(1.0, 1.0, 0.25)
    for lam in model.lattice(10):
        np.testing.assert_allclose(cg.multiplier_a(GroupGauss(b), model, float(lam)),
                                   cg.multiplier_a_closed(b, model, float(lam)), rtol=1e-10)


def test_multiplier_against_adaptive_quadrature():
    # 2 int h(H) c(-i mu) e^{mu H} 2 sinh H dH with mu = lam + rho, h = e^{-b H^2}
    model = cg.RankOneModel(1.0, 1.0, 0.25)
    b, lam = 1.0, 2.0
    mu = lam + 1
    ref, _ = integrate.quad(lambda H: 2 * np.exp(-b * H * H) * (1 / mu) * np.exp(mu * H)
                            * 2 * np.sinh(H), -30, 30, limit=200)
    np.testing.assert_allclose(abs(cg.multiplier_a(GroupGauss(b), model, lam)), abs(ref), rtol=1e-9)


@pytest.mark.parametrize("t", [0.25, 0.5])
def test_criterion_constant_for_one(t):
    model = cg.RankOneModel(1.0, 1.0, t)
    rep = cg.criterion_55(One(), model, model.lattice(16))
    np.testing.assert_allclose(rep.values.real, 4 * t * math.sqrt(8 * math.pi * t), rtol=1e-12)
    assert rep.verdict == BOUNDED


def test_criterion_gauss_closed():
    model = cg.RankOneModel(1.0, 1.0, 0.25)
    g = GroupGauss(0.5)
    lams = [0.0, 2.0, 5.0]
    rep = cg.criterion_55(g, model, lams)
    for lam, v in zip(lams, rep.values.real):
        np.testing.assert_allclose(v, cg.criterion_55_closed(g, model, lam), rtol=1e-10)
        mpos = 4 * 0.25 * (lam + 1)
        ref, _ = integrate.quad(lambda H: np.exp(-0.5 * H * H) * H * np.exp(-(H - mpos) ** 2 / 2),
                                -30, 30, epsabs=0, epsrel=1e-13, limit=200)
        np.testing.assert_allclose(v, abs(ref) / (lam + 1), rtol=1e-9)


def test_criterion_divergence():
    model = cg.RankOneModel(1.0, 1.0, 0.25)
    with pytest.raises(DivergenceError):
        cg.criterion_integral(RadialProfile(np.cosh, DecayBudget(1.0)), model, 1.0)


def test_lattice():
    np.testing.assert_allclose(cg.RankOneModel(1.0, 0.5, 0.25).lattice(4), [0, 0.5, 1.0, 1.5])
