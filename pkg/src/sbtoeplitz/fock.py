"""Toeplitz operators on the Fock space and on the heat Bergman spaces.

Radial symbols act diagonally on the monomial basis ``zeta_alpha``; the
eigenvalue depends only on ``|alpha| = k`` and is computed two ways:

* directly, as a moment of the symbol against ``r^{2k} e^{-r^2/2}``;
* through the heat flow ``g * q_{1/4}`` paired with the Laguerre
  function ``phi_k(2w)``.

All measure constants are fixed by requiring ``R_k(one) = 1``.
"""
from __future__ import annotations

import functools
import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import quadrature as quad
from . import specfun
from .core import (BOUNDED, DecayBudget, GaussH, GaussRadial, GaussY, One, SequenceReport,
                   SymbolSpec, make_report)
from .errors import AccuracyError, DivergenceError, RangeError
from .scaled import ScaledValue

__all__ = [
    "MultiIndexSet",
    "ToeplitzMatrix",
    "zeta",
    "zeta_values",
    "toeplitz_entry",
    "toeplitz_matrix",
    "radial_seq_direct",
    "radial_seq_heatflow",
    "cor23_check",
    "Cor23Result",
    "laguerre_l1_integral",
    "laguerre_l1_exponent",
    "heat_bergman_multiplier",
    "MultiplierRoutes",
    "sesquilinear_check",
]


# ---------------------------------------------------------------------------
# basis


@dataclass(frozen=True)
class MultiIndexSet:
    """All ``alpha`` in ``N^n`` with ``|alpha| <= max_degree``, graded lexicographic."""

    n: int
    max_degree: int

    @functools.cached_property
    def indices(self):
        out = []
        for deg in range(self.max_degree + 1):
            level = [a for a in itertools.product(range(deg + 1), repeat=self.n) if sum(a) == deg]
            out.extend(sorted(level, reverse=True))
        return tuple(out)

    def __len__(self):
        return math.comb(self.max_degree + self.n, self.n)

    def __iter__(self):
        return iter(self.indices)


def _log_zeta_norm(alpha):
    alpha = np.asarray(alpha)
    return -0.5 * alpha.sum() * math.log(2.0) - 0.5 * float(np.sum(gammaln(alpha + 1)))


def zeta(alpha, z) -> ScaledValue:
    """Orthonormal monomial ``z^alpha / (2^{|alpha|/2} sqrt(alpha!))`` at one point."""
    alpha = tuple(int(a) for a in np.atleast_1d(alpha))
    if sum(alpha) > 60:
        raise RangeError(f"|alpha| must be at most 60, got {sum(alpha)}")
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if z.size != len(alpha):
        raise ValueError("alpha and z must have the same length")
    out = ScaledValue.from_log(_log_zeta_norm(alpha))
    for a, zj in zip(alpha, z):
        if a:
            out = out * ScaledValue.from_value(zj) ** a
    return out


def zeta_values(alpha, z):
    """``zeta_alpha`` at points ``z`` of shape ``(N, n)`` (native complex)."""
    alpha = np.asarray(alpha)
    z = np.asarray(z, dtype=complex)
    return np.exp(_log_zeta_norm(alpha)) * np.prod(z ** alpha, axis=-1)


# ---------------------------------------------------------------------------
# matrix entries


def _entry_polar(g, alpha, beta, n, support):
    """Entry for a radial symbol with compact support, in polar coordinates."""
    lo, hi = support
    deg = sum(alpha) + sum(beta)
    mr = max(24, deg + 16)
    mt = deg + 4
    factors = [quad.gauss_legendre(mr, lo, hi)]
    if n == 2:
        factors.append(quad.gauss_legendre(max(16, deg + 8), 0.0, math.pi / 2))
    factors += [quad.truncated_uniform(mt, 0.0, 2 * math.pi)] * n
    rule = quad.TensorRule(factors)

    def f(p):
        R = p[:, 0]
        if n == 1:
            radii = R[:, None]
            jac = R
            th = p[:, 1:2]
        else:
            radii = np.stack([R * np.cos(p[:, 1]), R * np.sin(p[:, 1])], axis=-1)
            jac = R ** 3 * np.cos(p[:, 1]) * np.sin(p[:, 1])
            th = p[:, 2:4]
        z = radii * np.exp(1j * th)
        return (g.radial(R) * zeta_values(alpha, z) * np.conj(zeta_values(beta, z))
                * np.exp(-0.5 * R * R) * jac)

    return quad.integrate_nd(f, rule) / (2 * math.pi) ** n


def toeplitz_entry(g: SymbolSpec, alpha, beta, n: int, m: int | None = None) -> complex:
    """``<T_g zeta_alpha, zeta_beta> = (2 pi)^{-n} int g zeta_alpha conj(zeta_beta) e^{-|z|^2/2} dz``."""
    alpha = tuple(int(a) for a in np.atleast_1d(alpha))
    beta = tuple(int(b) for b in np.atleast_1d(beta))
    if n > 2:
        raise RangeError("matrix entries are assembled for n <= 2")
    if len(alpha) != n or len(beta) != n:
        raise ValueError("multi-indices must have length n")
    if not g.decay.gaussian_rate < 0.5:
        raise DivergenceError(
            f"symbol growth rate {g.decay.gaussian_rate} is not dominated by e^(-|z|^2/2)")
    support = getattr(g, "support", None)
    if g.is_radial and support is not None:
        return _entry_polar(g, alpha, beta, n, support)
    # weight e^{-|z|^2/2} is e^{-|u|^2} with z = sqrt(2) u; widen for the symbol
    eff = 0.5 - g.decay.gaussian_rate
    scale = 1.0 / math.sqrt(eff)
    if m is None:
        m = max(24, (sum(alpha) + sum(beta) + g.decay.poly_degree) // 2 + 24)
    rule = quad.TensorRule.hermite(m, 2 * n)

    def f(p):
        z = p[:, :n] + 1j * p[:, n:]
        return (g.evaluate(np.concatenate([p[:, :n], p[:, n:]], axis=-1))
                * zeta_values(alpha, z) * np.conj(zeta_values(beta, z))
                * np.exp(-0.5 * np.sum(p * p, axis=-1)))

    return quad.integrate_nd(f, rule, scales=np.full(2 * n, scale)) / (2 * math.pi) ** n


@dataclass(frozen=True)
class ToeplitzMatrix:
    index_set: MultiIndexSet
    entries: np.ndarray

    def hermitian_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))


def toeplitz_matrix(g: SymbolSpec, n: int, max_degree: int) -> ToeplitzMatrix:
    """Dense truncation ``M[b, a] = <T_g zeta_a, zeta_b>`` over ``|alpha| <= max_degree``."""
    if max_degree > 6:
        raise RangeError("matrix assembly is capped at degree 6")
    idx = MultiIndexSet(n, max_degree)
    basis = idx.indices
    M = np.empty((len(basis), len(basis)), dtype=complex)
    for i, b in enumerate(basis):
        for j, a in enumerate(basis):
            M[i, j] = toeplitz_entry(g, a, b, n)
    return ToeplitzMatrix(idx, M)


# ---------------------------------------------------------------------------
# radial sequences


def _require_radial(g):
    if not g.is_radial:
        raise ValueError(f"symbol {g.name} is not radial")


def _direct_value(g, n, k, tol):
    # R_k = int g r^{2k+2n-1} e^{-r^2/2} dr / (2^{k+n-1} (k+n-1)!)
    lognorm = -(k + n - 1) * math.log(2.0) - math.lgamma(k + n)
    support = getattr(g, "support", None)

    def f(r):
        with np.errstate(divide="ignore"):
            logr = np.log(r)
        gm, gl = g.radial_scaled(r)
        return np.asarray(gm, dtype=complex), gl + 2 * k * logr - 0.5 * r * r + lognorm

    budget = g.decay.shifted(-0.5)
    if support is None and not budget.gaussian_rate < 0:
        raise DivergenceError(
            f"symbol growth rate {g.decay.gaussian_rate} is not dominated by e^(-r^2/2)")
    if support is not None:
        lo, hi = support
        # the r^{2k} weight peaks sharply near the outer edge for large k
        return quad.radial_integral(f, budget, n, tol, support=(lo, hi), m0=32)
    return quad.radial_integral(f, budget, n, tol, m0=32)


def radial_seq_direct(g: SymbolSpec, n: int, kmax: int, tol: float = 1e-12) -> SequenceReport:
    """Eigenvalues ``R_k(g)``, ``k = 0..kmax``, from the moment formula, with ``R_k(one) = 1``."""
    _require_radial(g)
    ks = list(range(kmax + 1))
    vals = [_direct_value(g, n, k, tol) for k in ks]
    return make_report(ks, vals)


@functools.lru_cache(maxsize=16)
def _heatflow_calibration(n):
    """Constant making the heat-flow route give 1 for ``g = one`` at ``k = 0``."""
    raw = _heatflow_raw(One(), n, [0], 1e-13)[0]
    return 1.0 / raw


def _heat_profile(g, n):
    """``h = g * q_{1/4}`` on ``R^{2n}`` as a radial function, plus its decay budget."""
    s = 0.25
    rate = g.decay.gaussian_rate
    hrate = rate / (1 - 4 * s * rate)
    support = getattr(g, "support", None)
    if support is not None:
        # (r - r1)^2 envelope; slightly loosened so the quadrature is not misled
        hrate = -0.9
    closed = isinstance(g, (One, GaussY, GaussRadial, GaussH))
    d = 2 * n

    def h(r):
        r = np.asarray(r, dtype=float)
        pts = np.zeros(r.shape + (d,))
        pts[..., 0] = r
        if closed:
            return np.asarray(specfun.heat_flow(g, s, pts, "closed"), dtype=float)
        return np.asarray(specfun.heat_flow(g, s, pts, "radial"), dtype=float)

    return h, DecayBudget(hrate, g.decay.poly_degree, 1.0)


# relative accuracy promised by the heat-flow route before it warns
HEATFLOW_TARGET = 1e-6


def _heatflow_raw(g, n, ks, tol, lossy=None):
    h, hb = _heat_profile(g, n)
    budget = hb.shifted(-1.0)
    out = []
    for k in ks:
        logfac = math.lgamma(k + 1) + math.lgamma(n) - math.lgamma(k + n)

        def f(r, k=k):
            mant, logs = specfun.laguerre_scaled([k], n - 1, 2 * r * r)
            return mant[0] * h(r), logs[0] - r * r + logfac

        val, mass = quad.radial_integral(f, budget, n, tol, m0=32, relative_to_abs=True,
                                         scaled=True, return_mass=True)
        # rounding in an O(mass) oscillating sum bounds what |val| can resolve
        if lossy is not None and not val.is_zero:
            est = math.exp(mass.log_abs() - val.log_abs()) * 1e-15
            if est > HEATFLOW_TARGET:
                lossy.append((k, est))
        out.append((-1) ** k * val.to_complex())
    return out


def radial_seq_heatflow(g: SymbolSpec, n: int, kmax: int, tol: float = 1e-12) -> SequenceReport:
    """Eigenvalues ``R_k(g)`` through the heat flow ``g * q_{1/4}``.

    ``R_k = c_n (-1)^k k!(n-1)!/(k+n-1)! int h(r) L_k^{n-1}(2r^2) e^{-r^2} r^{2n-1} dr``
    with ``c_n`` measured once from ``g = one``.  For symbols whose ``R_k``
    is tiny next to ``h`` (sharp cut-offs at large ``k``) the integral
    cancels beyond double precision; a ``RuntimeWarning`` names the first
    ``k`` where the estimated error exceeds ``HEATFLOW_TARGET``.
    """
    _require_radial(g)
    if n > 2:
        raise RangeError("the heat-flow route is implemented for n <= 2")
    ks = list(range(kmax + 1))
    lossy = []
    raw = _heatflow_raw(g, n, ks, tol, lossy)
    if lossy:
        k0, est = lossy[0]
        warnings.warn(f"heat-flow route loses precision to cancellation from k = {k0} "
                      f"(estimated relative error {est:.1e} there); prefer the direct route",
                      RuntimeWarning, stacklevel=2)
    c = _heatflow_calibration(n)
    return make_report(ks, [c * v for v in raw])


@dataclass(frozen=True)
class Cor23Result:
    premise_holds: bool
    decay_constant: float
    report: SequenceReport

    @property
    def consistent(self) -> bool:
        """False only if the premise holds yet the sequence does not read as bounded."""
        return (not self.premise_holds) or self.report.verdict == BOUNDED


def cor23_check(g: SymbolSpec, n: int, kmax: int = 30) -> Cor23Result:
    """Test the premise ``|g * q_{1/4}(z)| <= C/|z|`` on a log grid and report ``R_k``.

    The premise is read as holding when ``|h(r)| r`` is finite on the grid
    and its maximum is not at the outer end (so it is not still growing).
    """
    _require_radial(g)
    h, _ = _heat_profile(g, n)
    r = np.logspace(-2, math.log10(30.0), 96)
    with np.errstate(over="ignore", invalid="ignore"):
        prod = np.abs(h(r)) * r
    finite = bool(np.all(np.isfinite(prod)))
    holds = finite and int(np.argmax(prod)) < r.size - 1
    C = float(np.max(prod)) if finite else math.inf
    return Cor23Result(holds, C, radial_seq_direct(g, n, kmax))


# ---------------------------------------------------------------------------
# Laguerre L1 asymptotics


def laguerre_l1_integral(k: int, n: int, beta: float, panel_points: int = 16,
                         refine: int = 1) -> float:
    """``int_0^inf |calL_k^{n-1}(r^2)| r^{-beta} r dr`` on panels of width ``pi/sqrt(4k)``."""
    if not beta < 2 * n:
        raise DivergenceError(f"beta must be below 2n = {2 * n} for convergence at 0")
    width = math.pi / math.sqrt(4 * max(k, 1)) / refine
    turning = math.sqrt(4 * k + 2 * n)
    top = turning + 12.0
    edges = np.arange(0.0, top + width, width)
    r, w = quad.composite_legendre(edges, panel_points)
    vals = np.abs(specfun.normalized_laguerre(k, n, r)) * r ** (1 - beta)
    return float(np.dot(w, vals))


def laguerre_l1_exponent(beta: float, n: int = 1, k_range=(100, 800), points: int = 8,
                         check: bool = True):
    """Least-squares slope of ``log I_k`` against ``log k`` over ``k_range``.

    With ``check`` each integral is recomputed on halved panels and an
    :class:`AccuracyError` is raised if the two disagree beyond 1e-3.
    Returns ``(slope, ks, values)``.
    """
    ks = np.unique(np.round(np.geomspace(k_range[0], k_range[1], points)).astype(int))
    vals = []
    for k in ks:
        v = laguerre_l1_integral(int(k), n, beta)
        if check:
            v2 = laguerre_l1_integral(int(k), n, beta, refine=2)
            if abs(v2 - v) > 1e-3 * abs(v2):
                raise AccuracyError(f"paneled Laguerre integral unstable at k={k}", (v, v2))
            v = v2
        vals.append(v)
    vals = np.array(vals)
    slope = np.polyfit(np.log(ks), np.log(vals), 1)[0]
    return float(slope), ks, vals


# ---------------------------------------------------------------------------
# y-only symbols on the heat Bergman space


@dataclass(frozen=True)
class MultiplierRoutes:
    """Both evaluations of the Fourier multiplier of a ``y``-only symbol.

    ``tilted`` is the defining integral
    ``e^{-2t|xi|^2} int e^{-2 y.xi} g0(y) q_{t/2}(y) dy``; completing the
    square shows it equals the flow ``(g0 * q_{t/2})`` at ``-2t xi``, which
    is ``convolution``.  ``flow_at_xi`` is the flow at ``xi`` itself.
    """

    xi: np.ndarray
    tilted: np.ndarray
    convolution: np.ndarray
    flow_at_xi: np.ndarray

    @property
    def discrepancy(self) -> float:
        return float(np.max(np.abs(self.tilted - self.convolution)
                            / np.maximum(np.abs(self.convolution), 1e-300)))


def _tilted_integral(g0, t, xi, m):
    n = xi.size
    rule = quad.TensorRule.hermite(m, n)
    s = t / 2

    def f(y):
        return (np.exp(-2 * t * np.dot(xi, xi) - 2 * y @ xi)
                * np.asarray(g0.evaluate(y)) * specfun.heat_q(s, y))

    rate = g0.decay.gaussian_rate
    width = 1.0 / math.sqrt(1 / (4 * s) - rate)
    center = -2 * t * xi / (1 - 4 * s * rate)
    return quad.integrate_nd(f, rule, center, np.full(n, width))


def heat_bergman_multiplier(g0: SymbolSpec, t: float, xi, m: int = 64) -> MultiplierRoutes:
    """Multiplier ``m_t(xi)`` of ``T_g`` for ``g(x+iy) = g0(y)``, by both routes.

    ``xi`` has shape ``(N, n)`` or ``(N,)`` for ``n = 1``.
    """
    if not t > 0:
        raise RangeError(f"t must be positive, got {t}")
    if not g0.decay.gaussian_rate < 1 / (2 * t):
        raise DivergenceError(
            f"symbol growth rate {g0.decay.gaussian_rate} must be below 1/(2t) = {1 / (2 * t)}")
    xi = np.asarray(xi, dtype=float)
    if xi.ndim == 1:
        xi = xi[:, None]
    s = t / 2
    tilted = np.array([_tilted_integral(g0, t, x, m) for x in xi])
    if np.all(np.abs(tilted.imag) <= 1e-14 * np.abs(tilted.real)):
        tilted = tilted.real
    flow = lambda p: np.asarray(specfun.heat_flow(g0, s, p))
    return MultiplierRoutes(xi, tilted, flow(-2 * t * xi), flow(xi))


def _fock_gaussian_F(t):
    """``F = f * q_t`` for ``f = e^{-x^2/2}`` (n = 1), holomorphically extended."""
    s = 0.5 + t
    return lambda z: math.sqrt(2 * math.pi) * (4 * math.pi * s) ** -0.5 * np.exp(-z * z / (4 * s))


def sesquilinear_check(g0: SymbolSpec, t: float, m: int = 64):
    """Compare ``int g0(y) |F(x+iy)|^2 q_{t/2}(y) dx dy`` with ``c int m_t |f^|^2``.

    ``n = 1``, ``f = e^{-x^2/2}``; ``c`` is calibrated with ``g0 = one``.
    Returns ``(lhs, rhs)``.
    """
    F = _fock_gaussian_F(t)
    rule = quad.TensorRule.hermite(m, 2)

    def lhs_of(g):
        def f(p):
            z = p[:, 0] + 1j * p[:, 1]
            return np.abs(F(z)) ** 2 * g.evaluate(p[:, 1:2]) * specfun.heat_q(t / 2, p[:, 1:2])
        s = 0.5 + t
        yrate = 1 / (2 * t) - 1 / (2 * s) - g.decay.gaussian_rate
        return quad.integrate_nd(f, rule, scales=[math.sqrt(2 * s), 1 / math.sqrt(yrate)]).real

    xi_rule = quad.gauss_hermite(m)

    def rhs_of(g):
        # |f^(xi)|^2 = 2 pi e^{-xi^2}
        xs = xi_rule.nodes
        mt = heat_bergman_multiplier(g, t, xs).tilted
        return float(np.dot(xi_rule.weights, 2 * math.pi * np.real(mt)))

    c = lhs_of(One()) / rhs_of(One())
    return lhs_of(g0), c * rhs_of(g0)
