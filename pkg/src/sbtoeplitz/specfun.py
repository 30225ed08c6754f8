"""Special functions: Laguerre and Hermite families, heat kernels, Mehler kernel.

Quantities that overflow double precision (Laguerre polynomials at negative
argument, ``e^{r^2}`` factors) are returned as :class:`ScaledValue`, or as
``(mantissa, log_scale)`` array pairs from the ``*_rows`` helpers.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln, ive

from . import quadrature as quad
from .core import (Annulus, DecayBudget, GaussH, GaussRadial, GaussY, GaussYV,
                   GroupGauss, One, SpaceParams, SymbolSpec)
from .errors import DivergenceError, RangeError
from .kernels import hermite_fn_rows, laguerre_rows
from .scaled import ScaledValue

__all__ = [
    "laguerre",
    "laguerre_scaled",
    "normalized_laguerre",
    "hermite_fn",
    "hermite_fn_rows_at",
    "hermite_poly_normalized",
    "heat_q",
    "heat_flow",
    "twisted_heat_p",
    "twisted_heat_p_log",
    "phi_imaginary",
    "phi_imaginary_rows",
    "phi_real",
    "mehler_kernel_K",
    "special_hermite_fn",
    "SINGLE",
    "DOUBLE",
]

SINGLE = "single"
DOUBLE = "double"


# ---------------------------------------------------------------------------
# Laguerre


def laguerre_scaled(ks, a: float, x):
    """``L_k^a(x)`` for every ``k`` in ``ks`` and every ``x``, as ``(mant, logs)``.

    Output shape is ``(len(ks), len(x))``; ``ks`` may be in any order.
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=np.int64))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if ks.size and ks.min() < 0:
        raise RangeError("Laguerre degree must be nonnegative")
    order = np.argsort(ks, kind="stable")
    mant, logs = laguerre_rows(ks[order], float(a), x.ravel())
    inv = np.empty_like(order)
    inv[order] = np.arange(order.size)
    return mant[inv], logs[inv]


def laguerre(k: int, a: float, x: float) -> ScaledValue:
    """``L_k^a(x)`` by the three-term recurrence."""
    if not 0 <= k <= 10 ** 6:
        raise RangeError(f"laguerre degree must be in [0, 1e6], got {k}")
    mant, logs = laguerre_rows(np.array([k]), float(a), np.array([float(x)]))
    return ScaledValue(mant[0, 0], logs[0, 0])


def normalized_laguerre(k: int, n: int, r):
    """``(k!(n-1)!/(k+n-1)!)^{1/2} L_k^{n-1}(r^2) r^{n-1} e^{-r^2/2}``."""
    r = np.asarray(r, dtype=float)
    scalar = r.ndim == 0
    r1 = np.atleast_1d(r)
    mant, logs = laguerre_rows(np.array([k]), float(n - 1), r1 * r1)
    lognorm = 0.5 * (gammaln(k + 1) + gammaln(n) - gammaln(k + n))
    with np.errstate(divide="ignore"):
        logr = np.where(r1 > 0, np.log(np.where(r1 > 0, r1, 1.0)), -np.inf)
    power = (n - 1) * logr if n > 1 else 0.0
    out = mant[0] * np.exp(logs[0] + lognorm + power - 0.5 * r1 * r1)
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Hermite


def hermite_fn(k: int, x):
    """Normalised Hermite function ``Phi_k`` at real or complex ``x`` (entire extension)."""
    if not 0 <= k <= 200:
        raise RangeError(f"hermite_fn index must be in [0, 200], got {k}")
    x = np.asarray(x, dtype=complex)
    rows = hermite_fn_rows(int(k), x.ravel())
    out = rows[k].reshape(x.shape)
    return complex(out) if out.ndim == 0 else out


def hermite_fn_rows_at(kmax: int, x):
    """``Phi_0 .. Phi_kmax`` at the points ``x``; shape ``(kmax+1,) + x.shape``."""
    x = np.asarray(x, dtype=complex)
    return hermite_fn_rows(int(kmax), x.ravel()).reshape((kmax + 1,) + x.shape)


def hermite_poly_normalized(kmax: int, x):
    """Polynomial parts ``p_k`` with ``Phi_k(x) = p_k(x) e^{-x^2/2}``, ``k <= kmax``.

    Shape ``(kmax+1,) + x.shape``.
    """
    x = np.asarray(x, dtype=complex)
    out = np.empty((kmax + 1,) + x.shape, dtype=complex)
    out[0] = math.pi ** -0.25
    if kmax >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(1, kmax):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * x * out[k] - math.sqrt(k / (k + 1.0)) * out[k - 1]
    return out


# ---------------------------------------------------------------------------
# Euclidean heat kernel and heat flow


def heat_q(s: float, point):
    """Gaussian heat kernel ``(4 pi s)^{-d/2} e^{-|x|^2/4s}`` on ``R^d``.

    ``point`` has shape ``(..., d)``; a scalar is treated as ``d = 1``.
    """
    if not s > 0:
        raise RangeError(f"heat kernel time must be positive, got {s}")
    p = np.asarray(point, dtype=float)
    if p.ndim == 0:
        p = p[None]
    d = p.shape[-1]
    r2 = np.sum(p * p, axis=-1)
    out = (4 * math.pi * s) ** (-d / 2) * np.exp(-r2 / (4 * s))
    return float(out) if out.ndim == 0 else out


def _gauss_flow(rate, s, r2, d):
    """Flow of ``e^{rate |x|^2}`` (complex ``rate`` with ``Re rate < 1/4s``)."""
    den = 1 - 4 * s * rate
    return den ** (-d / 2) * np.exp(rate * r2 / den)


def _sphere_area(d):
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


def _angular_mean_scaled(d, c):
    """``e^{-c}`` times the mean of ``e^{c cos(theta)}`` over ``S^{d-1}``."""
    c = np.asarray(c, dtype=float)
    nu = d / 2 - 1
    small = c < 1e-8
    cs = np.where(small, 1.0, c)
    val = math.gamma(d / 2) * (cs / 2) ** (-nu) * ive(nu, cs)
    return np.where(small, np.exp(-c), val)


def _radial_flow(profile, budget, support, s, rho, d, m=24):
    """``(g * q_s)(x)`` at ``|x| = rho`` for radial ``g`` via a radius integral."""
    rate = budget.gaussian_rate
    kappa = 1 / (4 * s) - rate
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    out = np.empty(rho.shape)
    const = (4 * math.pi * s) ** (-d / 2) * _sphere_area(d)
    for i, p in enumerate(rho):
        center = p / (1 - 4 * s * rate)
        half = 12.0 / math.sqrt(kappa) + 4 * math.sqrt(s)
        lo, hi = max(0.0, center - half), center + half
        if support is not None:
            lo, hi = max(lo, support[0]), min(hi, support[1])
        if hi <= lo:
            out[i] = 0.0
            continue
        npan = max(4, int(math.ceil((hi - lo) * math.sqrt(kappa) * 2)))
        r, w = quad.composite_legendre(np.linspace(lo, hi, npan + 1), m)
        g = np.asarray(profile(r), dtype=float)
        integrand = g * r ** (d - 1) * np.exp(-(p - r) ** 2 / (4 * s)) \
            * _angular_mean_scaled(d, p * r / (2 * s))
        out[i] = const * np.dot(w, integrand)
    return out


def _check_flow_budget(g: SymbolSpec, s: float):
    rate = g.decay.gaussian_rate
    if not rate < 1 / (4 * s):
        raise DivergenceError(
            f"heat flow diverges: symbol growth rate {rate} must be below 1/(4s) = {1 / (4 * s)}")


def heat_flow(g: SymbolSpec, s: float, point, method: str = "auto"):
    """``(g * q_s)(x)`` on ``R^d`` with ``d = point.shape[-1]``.

    ``method``: ``closed`` (Gaussian families), ``radial`` (radius integral
    with the exact angular average, radial symbols), ``quadrature``
    (tensor Gauss-Hermite, ``d <= 4``) or ``auto``.
    """
    if not s > 0:
        raise RangeError(f"heat flow time must be positive, got {s}")
    _check_flow_budget(g, s)
    p = np.asarray(point, dtype=float)
    if p.ndim == 0:
        p = p[None]
    d = p.shape[-1]
    closed_ok = isinstance(g, (One, GaussRadial, GaussY, GaussH, GroupGauss, GaussYV))
    if method == "auto":
        method = "closed" if closed_ok else ("radial" if g.is_radial else "quadrature")
    if method == "closed":
        if not closed_ok:
            raise ValueError(f"no closed-form flow for {g.name}")
        r2 = np.sum(p * p, axis=-1)
        if isinstance(g, One):
            out = np.ones_like(r2)
        elif isinstance(g, GaussRadial):
            out = _gauss_flow(-g.a / 2, s, r2, d)
        elif isinstance(g, GaussY):
            out = _gauss_flow(-g.a, s, r2, d)
        elif isinstance(g, GaussH):
            out = _gauss_flow(-g.c, s, r2, d)
        elif isinstance(g, GroupGauss):
            out = _gauss_flow(-g.b, s, r2, d)
        else:
            if d % 2:
                raise ValueError("gauss-yv needs an even number of coordinates")
            h = d // 2
            out = (_gauss_flow(complex(g.alpha), s, np.sum(p[..., :h] ** 2, axis=-1), h)
                   * _gauss_flow(complex(g.beta), s, np.sum(p[..., h:] ** 2, axis=-1), h))
    elif method == "radial":
        if not g.is_radial:
            raise ValueError(f"{g.name} is not radial")
        r = np.sqrt(np.sum(p * p, axis=-1))
        support = getattr(g, "support", None)
        out = _radial_flow(g.radial, g.decay, support, s, r.ravel(), d).reshape(r.shape)
    elif method == "quadrature":
        out = _quadrature_flow(g, s, p)
    else:
        raise ValueError(f"unknown heat-flow method {method!r}")
    out = np.asarray(out)
    if out.ndim == 0:
        return complex(out) if np.iscomplexobj(out) else float(out)
    return out


def _quadrature_flow(g, s, p, m=48):
    d = p.shape[-1]
    if d > 4:
        raise ValueError("quadrature heat flow supports d <= 4")
    rule = quad.TensorRule.hermite(m, d)
    flat = p.reshape(-1, d)
    scale = 2 * math.sqrt(s)
    vals = []
    for x in flat:
        # q_s(y) dy = pi^{-d/2} e^{-|u|^2} du with y = 2 sqrt(s) u
        v = quad.integrate_nd(lambda u, x=x: g.evaluate(x[None, :] - scale * u), rule,
                              weighted=True) * math.pi ** (-d / 2)
        vals.append(v)
    vals = np.array(vals).reshape(p.shape[:-1])
    if np.all(np.abs(vals.imag) <= 1e-15 * np.maximum(1.0, np.abs(vals.real))):
        vals = vals.real
    return vals


# ---------------------------------------------------------------------------
# twisted heat kernel and Laguerre functions phi_k


def twisted_heat_p_log(t: float, rho2, n: int):
    """``log p_t`` with ``p_t = (4 pi sinh t)^{-n} e^{-coth(t) rho2 / 4}``."""
    if not t > 0:
        raise RangeError(f"t must be positive, got {t}")
    rho2 = np.asarray(rho2, dtype=float)
    return -n * math.log(4 * math.pi * math.sinh(t)) - rho2 / (4 * math.tanh(t))


def twisted_heat_p(t: float, rho2: float, n: int) -> ScaledValue:
    """Heat kernel of the special Hermite operator, summed in closed form.

    Equals ``(2 pi)^{-n} sum_k e^{-(2k+n)t} phi_k`` by the Laguerre
    generating function.
    """
    return ScaledValue.from_log(float(twisted_heat_p_log(t, rho2, n)))


def phi_imaginary_rows(ks, n: int, rho2, doubling: str = DOUBLE):
    """``phi_k`` at purely imaginary arguments as ``(mant, logs)`` arrays.

    ``double``: ``phi_k(2iy, 2iv) = L_k^{n-1}(-2 r^2) e^{r^2}``;
    ``single``: ``phi_k(iy, iv) = L_k^{n-1}(-r^2/2) e^{r^2/4}``.
    """
    rho2 = np.atleast_1d(np.asarray(rho2, dtype=float))
    if doubling == DOUBLE:
        arg, ex = -2.0 * rho2, rho2
    elif doubling == SINGLE:
        arg, ex = -0.5 * rho2, 0.25 * rho2
    else:
        raise ValueError(f"doubling must be {SINGLE!r} or {DOUBLE!r}")
    mant, logs = laguerre_scaled(ks, n - 1, arg)
    return mant, logs + ex[None, :]


def phi_imaginary(k: int, n: int, rho2: float, doubling: str = DOUBLE) -> ScaledValue:
    if not 0 <= k <= 10 ** 4:
        raise RangeError(f"phi_imaginary index must be in [0, 1e4], got {k}")
    mant, logs = phi_imaginary_rows([k], n, [rho2], doubling)
    return ScaledValue(mant[0, 0], logs[0, 0])


def phi_real(k: int, n: int, rho2):
    """``phi_k(x, u) = L_k^{n-1}(rho2/2) e^{-rho2/4}`` at real points."""
    rho2 = np.asarray(rho2, dtype=float)
    mant, logs = laguerre_scaled([k], n - 1, np.atleast_1d(rho2) / 2)
    out = mant[0] * np.exp(logs[0] - np.atleast_1d(rho2) / 4)
    return float(out[0]) if rho2.ndim == 0 else out.reshape(rho2.shape)


# ---------------------------------------------------------------------------
# Mehler kernel and special Hermite functions


def mehler_kernel_K(params: SpaceParams, z, w):
    """Reproducing kernel of the Hermite-Bergman space.

    ``(sinh 4t)^{-n/2} exp(-coth(4t)(z.z + conj(w).conj(w))/2 + <z, w>/sinh 4t)``
    with ``<z, w> = sum z_j conj(w_j)``.  Vectors are the last axis.
    """
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if z.ndim == 0:
        z = z[None]
    if w.ndim == 0:
        w = w[None]
    n = params.n
    if z.shape[-1] != n or w.shape[-1] != n:
        raise ValueError(f"z and w must have last dimension n={n}")
    s4 = math.sinh(4 * params.t)
    c4 = 1 / math.tanh(4 * params.t)
    wc = np.conj(w)
    expo = (-0.5 * c4 * (np.sum(z * z, axis=-1) + np.sum(wc * wc, axis=-1))
            + np.sum(z * wc, axis=-1) / s4)
    out = s4 ** (-n / 2) * np.exp(expo)
    return complex(out) if out.ndim == 0 else out


def special_hermite_fn(alpha: int, beta: int, z, w, n: int = 1):
    """``Phi_{alpha,beta}(z, w)``, the holomorphic extension of

    ``(2 pi)^{-1/2} int e^{i x xi} Phi_alpha(xi + u/2) Phi_beta(xi - u/2) d xi``.

    Shifting the contour to ``xi = eta + i z / 2`` leaves a polynomial
    against ``e^{-eta^2}``, which a small Gauss-Hermite rule integrates
    exactly for complex ``z, w``.
    """
    if n != 1:
        raise RangeError("special_hermite_fn is implemented for n = 1 only")
    if not (0 <= alpha <= 12 and 0 <= beta <= 12):
        raise RangeError(f"indices must lie in [0, 12], got ({alpha}, {beta})")
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    z, w = np.broadcast_arrays(z, w)
    rule = quad.gauss_hermite((alpha + beta) // 2 + 2)
    eta = rule.nodes.reshape((-1,) + (1,) * z.ndim)
    xi = eta + 0.5j * z
    kmax = max(alpha, beta)
    pa = hermite_poly_normalized(kmax, xi + 0.5 * w)[alpha]
    pb = hermite_poly_normalized(kmax, xi - 0.5 * w)[beta]
    integral = np.tensordot(rule.weights, pa * pb, axes=(0, 0))
    out = (2 * math.pi) ** -0.5 * np.exp(-0.25 * (z * z + w * w)) * integral
    return complex(out) if out.ndim == 0 else out
