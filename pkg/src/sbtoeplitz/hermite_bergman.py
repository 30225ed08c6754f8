"""Toeplitz operators on the Hermite-Bergman space ``H_t = e^{-tH} L^2(R^n)``.

The space is weighted by ``U_t`` and reproduced by the Mehler kernel
``K_t``.  This module provides the Berezin transform by two routes, the
Weyl-symbol map ``sigma_t``, the radiality test behind the Hermite
multiplier criterion, the Gaussian example in closed form, the
``h -> m_t(2k+n)`` construction, and Gutzmer's formula at ``n = 1``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm, qmc

from . import quadrature as quad
from . import specfun
from .core import (BOUNDED, UNBOUNDED, DecayBudget, GaussH, GaussRadial, GaussYV, One,
                   SequenceReport, SpaceParams, SymbolSpec, make_report)
from .errors import ConstraintError, DivergenceError, RangeError, SingularityError

__all__ = [
    "weight_U",
    "reproducing_constant",
    "berezin",
    "BerezinRoutes",
    "weyl_symbol_map",
    "semigroup_xy",
    "radiality_check",
    "RadialityResult",
    "sigma_profile",
    "example36",
    "Example36",
    "example36_sequence",
    "example36_beta",
    "remark38_profile",
    "HermiteMultiplier",
    "multiplier_from_h",
    "g_from_h",
    "g_from_h_gauss",
    "gutzmer_hermite_n1",
]


def weight_U(params: SpaceParams, x, y):
    """``U_t(x, y) = 4^n (sinh 4t)^{-n/2} exp(tanh(2t)|x|^2 - coth(2t)|y|^2)``."""
    t, n = params.t, params.n
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x2 = np.sum(x * x, axis=-1) if x.ndim else x * x
    y2 = np.sum(y * y, axis=-1) if y.ndim else y * y
    out = 4.0 ** n * math.sinh(4 * t) ** (-n / 2) * np.exp(
        math.tanh(2 * t) * x2 - y2 / math.tanh(2 * t))
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# Berezin transform


def _kernel_integral(params, g, z, m):
    """``int g(w) |K_t(w, z)|^2 U_t(w) dw`` over the plane (n = 1)."""
    t = params.t
    s = 0.25 * math.sinh(4 * t)
    rate = g.decay.gaussian_rate
    if not rate < 1 / (4 * s):
        raise DivergenceError(
            f"symbol growth rate {rate} must be below 1/sinh(4t) = {1 / (4 * s)}")
    width = 1.0 / math.sqrt(1 / (4 * s) - rate)
    center = np.array([z.real, z.imag]) / (1 - 4 * s * rate) if rate != 0 else \
        np.array([z.real, z.imag])
    rule = quad.TensorRule.hermite(m, 2)

    def f(p):
        w = p[:, 0] + 1j * p[:, 1]
        K = specfun.mehler_kernel_K(params, w[:, None], np.full((w.size, 1), z))
        return g.evaluate(p) * np.abs(K) ** 2 * weight_U(params, p[:, :1], p[:, 1:])

    return quad.integrate_nd(f, rule, center, [width, width])


@functools.lru_cache(maxsize=32)
def reproducing_constant(t: float, m: int = 48) -> float:
    """``||K_t(., 0)||^2_{U_t} / K_t(0, 0)`` measured by quadrature (n = 1).

    Analytically ``4 pi``; this is the single constant the Berezin
    quadrature route is calibrated with.
    """
    params = SpaceParams(1, t)
    val = _kernel_integral(params, One(), 0j, m).real
    return val / specfun.mehler_kernel_K(params, 0j, 0j).real


@dataclass(frozen=True)
class BerezinRoutes:
    quadrature: complex
    heatflow: complex

    @property
    def rel_err(self) -> float:
        return abs(self.quadrature - self.heatflow) / max(abs(self.heatflow), 1e-300)


def berezin(g: SymbolSpec, params: SpaceParams, z: complex, m: int = 48) -> BerezinRoutes:
    """Berezin transform ``<T_g k_z, k_z>`` by quadrature and as ``g * q_{sinh(4t)/4}``.

    ``g`` is read as a function on the plane via ``w -> g(Re w, Im w)``.
    """
    if params.n != 1:
        raise RangeError("the Berezin oracle is implemented for n = 1")
    z = complex(z)
    Kzz = specfun.mehler_kernel_K(params, z, z).real
    q = _kernel_integral(params, g, z, m) / (Kzz * reproducing_constant(params.t))
    hf = specfun.heat_flow(g, 0.25 * math.sinh(4 * params.t), [z.real, z.imag])
    if abs(complex(q).imag) <= 1e-14 * abs(q):
        q = q.real
    return BerezinRoutes(q, hf)


# ---------------------------------------------------------------------------
# Weyl symbol map and the semigroup identity


class _FlowSymbol(SymbolSpec):
    """``g * q_s`` in closed form, wrapped as a symbol for further flows."""

    name = "flow"

    def __init__(self, g, s):
        self.g, self.s = g, s

    @property
    def is_radial(self):
        return self.g.is_radial

    @property
    def decay(self):
        rate = self.g.decay.gaussian_rate
        return DecayBudget(rate / (1 - 4 * self.s * rate), self.g.decay.poly_degree)

    def evaluate(self, points):
        return np.asarray(specfun.heat_flow(self.g, self.s, points))

    def radial(self, r):
        r = np.asarray(r, dtype=float)
        return self.evaluate(r[..., None])


def weyl_symbol_map(g: SymbolSpec, params: SpaceParams, x, xi):
    """``sigma_t(x, xi) = (g * q_{sinh(4t)/8})(cosh(2t) x, -sinh(2t) xi)`` on ``R^{2n}``."""
    t = params.t
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    if x.ndim == 0:
        x, xi = x[None], xi[None]
    pts = np.concatenate([math.cosh(2 * t) * x, -math.sinh(2 * t) * xi], axis=-1)
    return specfun.heat_flow(g, math.sinh(4 * t) / 8, pts)


def semigroup_xy(g: SymbolSpec, params: SpaceParams, z, method: str = "quadrature"):
    """Both sides of ``g * q_{sinh(4t)/4} = (g * q_{sinh(4t)/8}) * q_{sinh(4t)/8}``.

    The left side is the closed-form flow; the right side flows ``sigma``
    again by ``method``.  Returns ``(lhs, rhs)`` at the plane point ``z``.
    """
    s = math.sinh(4 * params.t) / 8
    z = complex(z)
    p = [z.real, z.imag]
    lhs = specfun.heat_flow(g, 2 * s, p)
    rhs = specfun.heat_flow(_FlowSymbol(g, s), s, p, method)
    return lhs, rhs


# ---------------------------------------------------------------------------
# radiality


@dataclass(frozen=True)
class RadialityResult:
    is_radial: bool
    max_rel_dev: float


@functools.lru_cache(maxsize=32)
def _sphere_directions(d, m):
    # Halton points pushed through the normal quantile give low-discrepancy
    # Gaussian samples; normalising puts them on the sphere.
    u = qmc.Halton(d=d, scramble=False).random(m + 1)[1:]
    g = norm.ppf(u)
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def radiality_check(fn, radii, angular_samples: int = 32, tol: float = 1e-8,
                    dim: int = 2) -> RadialityResult:
    """Relative spread of ``fn`` over deterministic sphere samples at each radius.

    ``fn`` maps an ``(N, dim)`` array to ``N`` values.
    """
    if angular_samples < 16:
        raise RangeError("radiality_check needs at least 16 angular samples")
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    if radii.size == 0:
        raise RangeError("radiality_check needs at least one radius")
    dirs = _sphere_directions(dim, angular_samples)
    worst = 0.0
    for r in radii:
        vals = np.asarray(fn(r * dirs))
        mean = np.mean(vals)
        dev = np.std(vals) / max(abs(mean), 1e-300)
        worst = max(worst, float(dev))
    return RadialityResult(worst <= tol, worst)


def sigma_profile(g: SymbolSpec, params: SpaceParams):
    """``(y, v) -> (g * q_{sinh(4t)/8})(cosh(2t) y, -sinh(2t) v)`` as a callable on ``(N, 2n)``."""
    n = params.n

    def fn(p):
        p = np.asarray(p, dtype=float)
        return weyl_symbol_map(g, params, p[..., :n], p[..., n:])

    return fn


def remark38_profile(alpha: complex, beta: complex, t: float):
    """``h(y, v) = exp(-|y|^2/(tanh 2t + alpha)) exp(-(coth 2t - beta)|v|^2)``.

    When ``alpha coth 2t - beta tanh 2t = alpha beta`` the two rates agree
    and the profile is radial; for other pairs it is not.
    """
    a = 1 / (math.tanh(2 * t) + alpha)
    b = 1 / math.tanh(2 * t) - beta

    def fn(p):
        p = np.asarray(p, dtype=float)
        h = p.shape[-1] // 2
        return np.exp(-a * np.sum(p[..., :h] ** 2, axis=-1) - b * np.sum(p[..., h:] ** 2, axis=-1))

    return fn


# ---------------------------------------------------------------------------
# Gaussian example


def example36_beta(alpha: complex, t: float) -> complex:
    """The ``beta`` solving ``alpha coth 2t - beta tanh 2t = alpha beta``."""
    T = math.tanh(2 * t)
    if alpha + T == 0:
        raise SingularityError("alpha = -tanh(2t): no beta solves the radiality condition")
    return alpha / T / (alpha + T)


@dataclass(frozen=True)
class Example36:
    alpha: complex
    t: float
    beta: complex
    lam: complex
    ratio: complex
    verdict: str

    @property
    def sign_test(self) -> float:
        """``|alpha|^2 sinh 4t - 2 Re alpha``; nonnegative exactly when bounded."""
        return abs(self.alpha) ** 2 * math.sinh(4 * self.t) - 2 * complex(self.alpha).real


def example36(alpha: complex, t: float) -> Example36:
    """Closed forms for ``g = e^{alpha|y|^2 + beta|v|^2}`` on the radiality curve."""
    if not t > 0:
        raise RangeError(f"t must be positive, got {t}")
    alpha = complex(alpha)
    S4 = math.sinh(4 * t)
    if 2 - alpha * S4 == 0:
        raise SingularityError("alpha sinh(4t) = 2: lambda has a pole")
    beta = example36_beta(alpha, t)
    lam = alpha / math.tanh(2 * t) * S4 / (2 - alpha * S4)
    if lam == 1:
        raise SingularityError("lambda = 1: the ratio (1+lambda)/(1-lambda) has a pole")
    ratio = (1 + lam) / (1 - lam)
    verdict = BOUNDED if abs(ratio) <= 1 else UNBOUNDED
    if alpha.imag == 0 and beta.imag == 0:
        beta = complex(beta.real)
    return Example36(alpha, t, beta, lam, ratio, verdict)


def example36_sequence(alpha: float, t: float, kmax: int = 24):
    """The example's eigenvalue sequence and where it came from.

    For ``Re lambda' < 1/2``, ``lambda' = lambda/(1+lambda)``, the sequence
    is computed as the Fock eigenvalues of ``e^{lambda'|z|^2}`` by radial
    quadrature; otherwise the defining integrals diverge and the analytic
    continuation ``((1+lambda)/(1-lambda))^k`` is returned.  Returns
    ``(SequenceReport, source)`` with source ``quadrature`` or
    ``closed-form``.
    """
    from .fock import radial_seq_direct

    ex = example36(alpha, t)
    lam = complex(ex.lam)
    if lam.imag == 0 and lam.real != -1:
        lp = lam.real / (1 + lam.real)
        if lp < 0.5:
            rep = radial_seq_direct(GaussRadial(-2 * lp), 1, kmax)
            vals = rep.values / rep.values[0]
            return make_report(range(kmax + 1), vals), "quadrature"
    ks = np.arange(kmax + 1)
    return make_report(ks, ex.ratio ** ks), "closed-form"


# ---------------------------------------------------------------------------
# h -> m_t(2k+n)


@dataclass(frozen=True)
class HermiteMultiplier:
    params: SpaceParams
    values: tuple
    report: SequenceReport

    def ratios(self):
        v = np.asarray(self.values, dtype=complex)
        return v[1:] / v[:-1]


def _h_parts(h):
    """``(scaled profile, budget)``; the profile returns ``(mant, logs)``."""
    if isinstance(h, SymbolSpec):
        return h.radial_scaled, h.decay
    func, budget = h
    return (lambda r: (np.asarray(func(r)), 0.0)), budget


def _m_raw(hfun, budget, n, t, k, tol):
    logfac = math.lgamma(k + 1) + math.lgamma(n) - math.lgamma(k + n)

    def f(r):
        mant, logs = specfun.laguerre_scaled([k], n - 1, -2 * r * r)
        hm, hl = hfun(r)
        return mant[0] * hm, logs[0] + hl + r * r + logfac - 2 * (2 * k + n) * t

    return quad.radial_integral(f, budget.shifted(1.0), n, tol, m0=32, scaled=True)


@functools.lru_cache(maxsize=16)
def _sphere_calibration(n):
    """Sphere constant measured from ``h = e^{-2r^2}`` at ``k = 0``: ``(pi/(c-1))^n`` exact."""
    ref = GaussH(2.0)
    raw = _m_raw(ref.radial_scaled, ref.decay, n, 1.0, 0, 1e-13)
    exact = math.pi ** n * math.exp(-2 * n)
    return exact / raw.to_complex().real


def multiplier_from_h(h, params: SpaceParams, kmax: int, tol: float = 1e-12) -> HermiteMultiplier:
    """``m_t(2k+n) = e^{-2(2k+n)t} k!(n-1)!/(k+n-1)! int h(y,v) phi_k(2iy,2iv) dy dv``.

    ``h`` is a radial symbol (e.g. ``GaussH``) or a pair ``(callable, DecayBudget)``.
    """
    hfun, budget = _h_parts(h)
    if not budget.gaussian_rate < -1:
        raise DivergenceError(
            f"h must satisfy the integrability condition: h(y,v) e^(|y|^2+|v|^2) times any "
            f"polynomial must be integrable, i.e. decay rate below -1 (got {budget.gaussian_rate})")
    n, t = params.n, params.t
    omega = _sphere_calibration(n)
    vals = []
    for k in range(kmax + 1):
        raw = _m_raw(hfun, budget, n, t, k, tol)
        vals.append((raw * omega).to_complex())
    return HermiteMultiplier(params, tuple(vals), make_report(range(kmax + 1), vals))


def g_from_h_gauss(c: float, params: SpaceParams):
    """For ``h = GaussH(c)``: ``g = const * e^{alpha|xi|^2 + beta|v|^2}``.

    Returns ``(const, GaussYV(alpha, beta))`` with ``alpha = 1/c - tanh 2t``
    and ``beta = coth 2t - c``.
    """
    n, t = params.n, params.t
    const = (math.pi / c) ** (n / 2) / (4.0 ** n * math.sinh(4 * t) ** (-n / 2))
    return const, GaussYV(complex(1 / c - math.tanh(2 * t)), complex(1 / math.tanh(2 * t) - c))


def g_from_h(h, params: SpaceParams, xi, v, method: str = "closed", m: int = 48):
    """``g(xi, v) = U_t(xi, v)^{-1} int e^{-2 y.xi} h(y, v) dy``.

    ``method='closed'`` needs ``h = GaussH``; ``quadrature`` integrates the
    tilt numerically for any ``(N, 2n)``-evaluable ``h``.
    """
    n = params.n
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    v = np.atleast_2d(np.asarray(v, dtype=float))
    U = weight_U(params, xi, v)
    if method == "closed":
        if not isinstance(h, GaussH):
            raise ValueError("closed form is available for gauss-h only")
        c = h.c
        inner = ((math.pi / c) ** (n / 2) * np.exp(np.sum(xi * xi, axis=-1) / c)
                 * np.exp(-c * np.sum(v * v, axis=-1)))
        return inner / U
    rate = h.decay.gaussian_rate
    if not rate < 0:
        raise DivergenceError("the tilt integral needs Gaussian decay of h in y")
    rule = quad.TensorRule.hermite(m, n)
    width = 1 / math.sqrt(-rate)
    out = []
    for x, vv in zip(xi, v):
        def f(y, x=x, vv=vv):
            pts = np.concatenate([y, np.broadcast_to(vv, y.shape)], axis=-1)
            return np.exp(-2 * y @ x) * np.asarray(h.evaluate(pts))
        out.append(quad.integrate_nd(f, rule, x / rate, np.full(n, width)).real)
    return np.array(out) / U


# ---------------------------------------------------------------------------
# Gutzmer's formula, n = 1


def gutzmer_hermite_n1(coeffs, y: float, v: float, m: int = 64, m_theta: int = 64):
    """Both sides of Gutzmer's formula for ``F = sum c_k Phi_k`` at ``(iy, iv)``.

    The left side averages ``int |pi(sigma.(iy, iv)) F(xi)|^2 d xi`` over the
    rotation circle; with ``sigma_theta.(iy, iv) = (ia, ib)`` the integrand
    is ``e^{-2 a xi} |F(xi + i b)|^2``.  The right side is
    ``sum |c_k|^2 phi_k(2iy, 2iv)``.  Returns ``(lhs, rhs)``.
    """
    merged = {}
    for k, c in coeffs:
        merged[int(k)] = merged.get(int(k), 0j) + complex(c)
    kmax = max(merged)
    th = quad.truncated_uniform(m_theta, 0.0, 2 * math.pi)
    rule = quad.gauss_hermite(m)
    wcomp = rule.compensated_weights()
    total = 0.0
    for theta, wt in zip(th.nodes, th.weights):
        a = y * math.cos(theta) - v * math.sin(theta)
        b = y * math.sin(theta) + v * math.cos(theta)
        xi = rule.nodes - a          # peak of e^{-2 a xi} |F(xi + ib)|^2
        rows = specfun.hermite_fn_rows_at(kmax, xi + 1j * b)
        F = sum(c * rows[k] for k, c in merged.items())
        total += wt * np.dot(wcomp, np.exp(-2 * a * xi) * np.abs(F) ** 2)
    lhs = total / (2 * math.pi)
    r2 = y * y + v * v
    rhs = sum(abs(c) ** 2 * specfun.phi_imaginary(k, 1, r2).to_float()
              for k, c in merged.items())
    return lhs, rhs
