"""Toeplitz operators on the twisted Bergman space ``B_t^* = e^{-tL} L^2(R^{2n})``.

Entire functions ``F(z, w)`` on ``C^{2n}`` are weighted by
``W_t = e^{u.y - v.x} p_{2t}(2y, 2v)``.  Symbols that only see ``(y, v)``
give operators that are diagonal in the basis ``e^{-tL} Phi_{alpha,beta}``
with eigenvalues built from ``p_{2t}`` and ``phi_k(2iy, 2iv)``.

Conventions: ``p_t = (4 pi sinh t)^{-n} e^{-coth(t) |.|^2 / 4}``.  The
heat-kernel constant is a matter of convention, so every identity here is
tested up to a single measured constant (a :class:`CalibrationConstant`,
``4^{-n}`` for this normalization) and exactly in its dependence on
``k``, ``t`` and the arguments.  ``Phi_{alpha,beta}`` is the Fourier-Wigner
pair of ``specfun.special_hermite_fn``; ``beta`` is the ``L``-eigen index.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from . import quadrature as quad
from . import specfun
from .core import One, SequenceReport, SpaceParams, SymbolSpec, make_report
from .errors import AccuracyError, ConstraintError, DivergenceError, RangeError
from .scaled import ScaledValue

__all__ = [
    "TwistedPoint",
    "CalibrationConstant",
    "weight_W",
    "Identity37Result",
    "verify_identity_37",
    "identity37_kappa",
    "Lemma43Result",
    "verify_lemma_43",
    "diag_seq",
    "matrix_entry_twisted",
    "DiagonalityResult",
    "diagonality_check",
    "isometry_check",
    "twisted_translate",
    "invariance_check_48",
    "gutzmer_twisted_n1",
]

MAX_4D_NODES = 40


@dataclass(frozen=True)
class TwistedPoint:
    """``(z, w) = (x + iy, u + iv)`` in ``C^{2n}``."""

    z: np.ndarray
    w: np.ndarray

    def __init__(self, z, w):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        w = np.atleast_1d(np.asarray(w, dtype=complex))
        if z.shape != w.shape or z.ndim != 1:
            raise ConstraintError(f"z and w must be vectors of equal length, "
                                  f"got shapes {z.shape} and {w.shape}")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "w", w)

    @property
    def n(self) -> int:
        return self.z.size

    @property
    def x(self):
        return self.z.real

    @property
    def y(self):
        return self.z.imag

    @property
    def u(self):
        return self.w.real

    @property
    def v(self):
        return self.w.imag


@dataclass(frozen=True)
class CalibrationConstant:
    """Measured constant absorbing the loose normalization of an identity."""

    context: str
    kappa: float

    def __post_init__(self):
        if not self.kappa > 0:
            raise ConstraintError(f"calibration constant must be positive, got {self.kappa}")


def _coth(x):
    return 1.0 / math.tanh(x)


def _net_rate(t: float) -> float:
    """``coth(2t) - 1``: the decay left in ``p_{2t}(2y,2v) phi_k(2iy,2iv)``."""
    return _coth(2 * t) - 1.0


def _log_p2t_doubled(t: float, r2, n: int):
    """``log p_{2t}(2y, 2v)`` at ``|y|^2 + |v|^2 = r2``."""
    return specfun.twisted_heat_p_log(2 * t, 4.0 * np.asarray(r2, dtype=float), n)


def weight_W(params: SpaceParams, point: TwistedPoint) -> ScaledValue:
    """``W_t(z, w) = e^{u.y - v.x} p_{2t}(2y, 2v)``."""
    if point.n != params.n:
        raise ConstraintError(f"point has n={point.n}, params have n={params.n}")
    r2 = float(np.sum(point.y ** 2 + point.v ** 2))
    mod = float(np.dot(point.u, point.y) - np.dot(point.v, point.x))
    return ScaledValue.from_log(mod + float(_log_p2t_doubled(params.t, r2, params.n)))


def _sphere_area(n: int) -> float:
    # |S^{2n-1}|
    return 2 * math.pi ** n / math.factorial(n - 1)


def _log_binom(k: int, n: int) -> float:
    """``log C(k+n-1, n-1)``."""
    return math.lgamma(k + n) - math.lgamma(k + 1) - math.lgamma(n)


# ---------------------------------------------------------------------------
# identity (37) and the diagonal sequence


def _eigen_integral(g0: SymbolSpec | None, k: int, params: SpaceParams, tol: float) -> ScaledValue:
    """``int g0(y,v) p_{2t}(2y,2v) phi_k(2iy,2iv) dy dv`` (``g0=None`` means 1)."""
    n, t = params.n, params.t
    net = _net_rate(t)
    support = None
    if g0 is None:
        budget = One().decay.shifted(-net, 2 * k)
    else:
        support = getattr(g0, "support", None)
        budget = g0.decay.shifted(-net, 2 * k)
        if support is None and not g0.decay.gaussian_rate < net:
            raise DivergenceError(
                f"symbol rate {g0.decay.gaussian_rate} must stay below "
                f"coth(2t) - 1 = {net:.6g} for the diagonal integrals to converge")

    def integrand(r):
        r2 = np.asarray(r, dtype=float) ** 2
        mant, logs = specfun.phi_imaginary_rows([k], n, r2, specfun.DOUBLE)
        mant, logs = mant[0], logs[0] + _log_p2t_doubled(t, r2, n)
        if g0 is not None:
            gm, gl = g0.radial_scaled(np.asarray(r, dtype=float))
            mant, logs = mant * gm, logs + gl
        return mant, logs

    m0 = max(16, 2 ** math.ceil(math.log2(k // 2 + 2)))
    val = quad.radial_integral(integrand, budget, n, tol, support=support, m0=m0,
                               scaled=True, relative_to_abs=True)
    return val * _sphere_area(n)


@dataclass(frozen=True)
class Identity37Result:
    kappa: CalibrationConstant
    max_rel_err: float
    ratios: tuple = field(default=(), repr=False)


def verify_identity_37(params: SpaceParams, kmax: int, tol: float = 1e-13) -> Identity37Result:
    """Check ``int p_{2t}(2y,2v) phi_k(2iy,2iv) = kappa C(k+n-1,n-1) e^{(2k+n)2t}``.

    ``kappa`` is read off at ``k = 0``; the returned error is the largest
    deviation of the remaining ``k`` from the predicted dependence.
    """
    if not 0 <= kmax <= 500:
        raise RangeError(f"kmax must lie in [0, 500], got {kmax}")
    n, t = params.n, params.t
    vals = [_eigen_integral(None, k, params, tol) for k in range(kmax + 1)]
    kappa = (vals[0] / ScaledValue.exp(2 * n * t)).to_float()
    ratios = []
    for k, val in enumerate(vals):
        pred = ScaledValue.from_log(math.log(kappa) + _log_binom(k, n) + (2 * k + n) * 2 * t)
        ratios.append((val / pred).to_float())
    err = max(abs(r - 1.0) for r in ratios)
    return Identity37Result(CalibrationConstant("identity37", kappa), err, tuple(ratios))


@functools.lru_cache(maxsize=64)
def identity37_kappa(n: int, t: float) -> CalibrationConstant:
    return verify_identity_37(SpaceParams(n, t), 0).kappa


def diag_seq(g0: SymbolSpec, params: SpaceParams, kmax: int, tol: float = 1e-12) -> SequenceReport:
    """Eigenvalues of ``T_g`` for ``g(z, w) = g0(y, v)``, ``g0`` radial.

    ``e^{-(2k+n)2t} C(k+n-1,n-1)^{-1} int g0 p_{2t}(2.) phi_k(2i.)``, divided
    by the ``g0 = 1`` calibration so that the identity operator gives 1.
    """
    if not g0.is_radial:
        raise ConstraintError(f"{g0.name} is not radial")
    if not 0 <= kmax <= 500:
        raise RangeError(f"kmax must lie in [0, 500], got {kmax}")
    n, t = params.n, params.t
    kappa = identity37_kappa(n, t).kappa
    values = []
    for k in range(kmax + 1):
        val = _eigen_integral(g0, k, params, tol)
        scale = ScaledValue.from_log(-(2 * k + n) * 2 * t - _log_binom(k, n) - math.log(kappa))
        values.append((val * scale).to_complex())
    return make_report(np.arange(kmax + 1), np.asarray(values))


# ---------------------------------------------------------------------------
# Lemma: twisted convolution of p_t with phi_k(i.)


@dataclass(frozen=True)
class Lemma43Result:
    lhs: complex
    rhs: complex

    @property
    def rel_err(self) -> float:
        return abs(self.lhs - self.rhs) / abs(self.rhs)


def _lemma43_raw(k: int, t: float, x: float, u: float, m: int) -> complex:
    """``int e^{i(u y - v x)/2} p_t(x-y, u-v) phi_k(iy, iv) dy dv`` at ``n = 1``."""
    ct = _coth(t)
    rate = 0.25 * (ct - 1.0)  # of the Gaussian left after completing the square
    c = np.array([x, u])
    center = ct * c / (ct - 1.0)
    scale = 1.0 / math.sqrt(rate)

    def f(pts):
        yy, vv = pts[:, 0], pts[:, 1]
        r2 = yy * yy + vv * vv
        mant, logs = specfun.phi_imaginary_rows([k], 1, r2, specfun.SINGLE)
        d2 = (x - yy) ** 2 + (u - vv) ** 2
        shift = (yy - center[0]) ** 2 + (vv - center[1]) ** 2
        loga = logs[0] + specfun.twisted_heat_p_log(t, d2, 1) + rate * shift
        phase = np.exp(0.5j * (u * yy - vv * x))
        return mant[0] * np.exp(loga) * phase

    rule = quad.TensorRule.hermite(m, 2)
    return quad.integrate_nd(f, rule, center, [scale, scale], weighted=True)


@functools.lru_cache(maxsize=64)
def _lemma43_kappa(t: float, m: int) -> float:
    return (_lemma43_raw(0, t, 0.0, 0.0, m) / math.exp(t)).real


def verify_lemma_43(params: SpaceParams, k: int, x: float, u: float, m: int = 48,
                    tol: float = 1e-9) -> Lemma43Result:
    """Both sides of ``p_t x phi_k(i.)`` at ``(x, u)``: ``phi_k(ix, iu) e^{(2k+1)t}``.

    The right side carries the constant measured at ``k = 0, x = u = 0``.
    """
    if params.n != 1:
        raise RangeError("the lemma check is implemented for n = 1")
    if not 0 <= k <= 8:
        raise RangeError(f"k must lie in [0, 8], got {k}")
    if abs(x) > 2 or abs(u) > 2:
        raise RangeError(f"|x|, |u| must not exceed 2, got ({x}, {u})")
    t = params.t
    lhs = _lemma43_raw(k, t, x, u, m)
    check = _lemma43_raw(k, t, x, u, m + 16)
    if abs(check - lhs) > tol * max(abs(check), 1e-300):
        raise AccuracyError(f"lemma quadrature unresolved at m={m}", (lhs, check))
    phi = specfun.phi_imaginary(k, 1, x * x + u * u, specfun.SINGLE)
    rhs = _lemma43_kappa(t, m) * math.exp((2 * k + 1) * t) * phi.to_float()
    return Lemma43Result(complex(check), complex(rhs))


# ---------------------------------------------------------------------------
# twisted translations


def twisted_translate(a, b, f):
    """``tau(a,b) f (z, w) = e^{-i/2 (a.w - b.z)} f(z - a, w - b)``.

    ``f`` takes ``(z, w)`` arrays (real or complex, ``n = 1`` scalars or
    arrays broadcast together); the result is a callable of the same form.
    """
    a = float(a)
    b = float(b)

    def translated(z, w):
        z = np.asarray(z)
        w = np.asarray(w)
        return np.exp(-0.5j * (a * w - b * z)) * f(z - a, w - b)

    return translated


def _phi_fn(alpha: int, beta: int):
    return lambda z, w: specfun.special_hermite_fn(alpha, beta, z, w)


# ---------------------------------------------------------------------------
# matrix entries by 4-D quadrature (n = 1)


def _as_symbol(g):
    """A callable ``g(x, y, u, v)`` and its Gaussian rate in ``(y, v)``."""
    if isinstance(g, SymbolSpec):
        if not g.is_radial:
            raise ConstraintError(f"{g.name} is not radial")
        rate = g.decay.gaussian_rate if getattr(g, "support", None) is None else 0.0
        return (lambda x, y, u, v: g.evaluate(np.stack([y, v], axis=-1))), rate
    if callable(g):
        return g, 0.0
    raise TypeError(f"symbol must be a SymbolSpec or callable, got {type(g).__name__}")


def _gram(g, funcs, t: float, m: int, shift=(0.0, 0.0)):
    """``G[i, j] = int g F_i conj(F_j) W_t`` over ``C^2`` for functions ``F_i``.

    The Gaussian part of ``|Phi|^2 W_t`` is ``e^{-((x+v)^2 + (u-y)^2)/2}
    e^{-(coth 2t - 1)(y^2+v^2)}``; the sheared coordinates ``x' = x + v - a``,
    ``u' = u - y - b`` turn it into a product rule.  ``shift = (a, b)``
    follows functions translated by ``tau(a, b)``.
    """
    if not 2 <= m <= MAX_4D_NODES:
        raise RangeError(f"4-D rules use 2..{MAX_4D_NODES} nodes per axis, got {m}")
    geval, rate = _as_symbol(g)
    c = _net_rate(t) - min(rate, 0.0)
    if not c > 0:
        raise DivergenceError(f"symbol rate {rate} must stay below coth(2t) - 1 = {_net_rate(t):.6g}")
    a, b = shift
    rule = quad.gauss_hermite(m)
    sx = math.sqrt(2.0)
    sy = 1.0 / math.sqrt(c)
    xs, wx = sx * rule.nodes, sx * rule.weights
    ys, wy = sy * rule.nodes, sy * rule.weights
    # inner (y, u', v) block, outer loop over x'
    Y, UP, V = np.meshgrid(ys, xs, ys, indexing="ij")
    Win = np.einsum("i,j,k->ijk", wy, wx, wy).ravel()
    Y, UP, V = Y.ravel(), UP.ravel(), V.ravel()
    r2 = Y * Y + V * V
    logp = _log_p2t_doubled(t, r2, 1)
    nf = len(funcs)
    G = np.zeros((nf, nf), dtype=complex)
    for xp, w0 in zip(xs, wx):
        x = xp - V + a
        u = UP + Y + b
        z = x + 1j * Y
        w = u + 1j * V
        vals = np.stack([f(z, w) for f in funcs])
        logwt = u * Y - V * x + logp + 0.5 * (xp * xp + UP * UP) + c * r2
        dens = w0 * Win * geval(x, Y, u, V) * np.exp(logwt)
        G += (vals * dens) @ vals.conj().T
    return G


def _basis_fns(pairs, t: float, shift=None):
    fns = []
    for al, be in pairs:
        f = _phi_fn(al, be)
        if shift is not None:
            f = twisted_translate(shift[0], shift[1], f)
        fns.append(f)
    decay = np.array([math.exp(-(2 * be + 1) * t) for _, be in pairs])
    return fns, decay


def _check_indices(pairs, cap):
    for p in pairs:
        if len(p) != 2 or not all(0 <= int(i) <= cap for i in p):
            raise RangeError(f"indices must lie in [0, {cap}], got {p}")


def matrix_entry_twisted(g0, params: SpaceParams, left, right, m: int = 16) -> complex:
    """``<T_g phi_{left}, phi_{right}>`` with ``phi_{ab} = e^{-(2b+1)t} Phi_{a,b}``."""
    if params.n != 1:
        raise RangeError("matrix entries are implemented for n = 1")
    _check_indices([left, right], 3)
    fns, decay = _basis_fns([tuple(left), tuple(right)], params.t)
    G = _gram(g0, fns, params.t, m)
    return complex(G[0, 1] * decay[0] * decay[1])


def _pairs(max_index: int):
    return [(a, b) for a in range(max_index + 1) for b in range(max_index + 1)]


@dataclass(frozen=True)
class DiagonalityResult:
    """Matrix of ``T_g`` on ``phi_{ab}``, ``a, b <= max_index``, over ``kappa``."""

    pairs: tuple
    matrix: np.ndarray
    expected_diag: np.ndarray

    @property
    def off_diagonal_max(self) -> float:
        off = self.matrix - np.diag(np.diag(self.matrix))
        return float(np.max(np.abs(off)))

    @property
    def diagonal_rel_err(self) -> float:
        d = np.diag(self.matrix)
        return float(np.max(np.abs(d - self.expected_diag) / np.abs(self.expected_diag)))


def diagonality_check(g0: SymbolSpec, params: SpaceParams, max_index: int = 1,
                      m: int = 16) -> DiagonalityResult:
    """All entries among ``phi_{ab}``; diagonal compared with :func:`diag_seq` at ``k = b``."""
    if params.n != 1:
        raise RangeError("matrix entries are implemented for n = 1")
    if not 0 <= max_index <= 3:
        raise RangeError(f"max_index must lie in [0, 3], got {max_index}")
    pairs = _pairs(max_index)
    fns, decay = _basis_fns(pairs, params.t)
    G = _gram(g0, fns, params.t, m) * np.outer(decay, decay)
    G = G / identity37_kappa(1, params.t).kappa
    seq = diag_seq(g0, params, max(max_index, 11)).values
    expected = np.array([seq[b] for _, b in pairs])
    return DiagonalityResult(tuple(pairs), G, expected)


def isometry_check(params: SpaceParams, pairs=((0, 0),), m: int = 16) -> float:
    """Largest ``| ||e^{-tL} Phi_{ab}||^2_{W_t} / kappa - 1 |``.

    ``||Phi_{ab}||_{L^2} = 1``, so the weighted norm of its heat image is
    the calibration constant alone.
    """
    pairs = [tuple(p) for p in pairs]
    _check_indices(pairs, 3)
    fns, decay = _basis_fns(pairs, params.t)
    G = _gram(One(), fns, params.t, m)
    norms = np.real(np.diag(G)) * decay ** 2 / identity37_kappa(1, params.t).kappa
    return float(np.max(np.abs(norms - 1.0)))


def invariance_check_48(g, params: SpaceParams, shift, max_index: int = 1,
                        m: int = 16) -> float:
    """``max |A - B| / max |B|`` with ``A = <T_g tau phi, tau phi>``, ``B = <T_g phi, phi>``.

    ``g`` is a radial :class:`SymbolSpec` on ``(y, v)`` or a callable
    ``g(x, y, u, v)``; only the former should be invariant.
    """
    if params.n != 1:
        raise RangeError("the invariance check is implemented for n = 1")
    if not 0 <= max_index <= 2:
        raise RangeError(f"max_index must lie in [0, 2], got {max_index}")
    a, b = (float(s) for s in shift)
    pairs = _pairs(max_index)
    fns, decay = _basis_fns(pairs, params.t)
    tfns, _ = _basis_fns(pairs, params.t, (a, b))
    D = np.outer(decay, decay)
    B = _gram(g, fns, params.t, m) * D
    A = _gram(g, tfns, params.t, m, shift=(a, b)) * D
    return float(np.max(np.abs(A - B)) / np.max(np.abs(B)))


# ---------------------------------------------------------------------------
# Gutzmer's formula for the special Hermite expansion (n = 1)


def _gutzmer_lhs(coeffs: dict, y: float, v: float, m: int, m_theta: int) -> float:
    """``(2 pi)^{-1} int_0^{2 pi} int_{R^2} e^{u y - v x} |F(sigma_theta(z, w))|^2 dx du``."""
    rule = quad.gauss_hermite(m)
    s = math.sqrt(2.0) * rule.nodes
    ws = math.sqrt(2.0) * rule.weights
    XP, UP = np.meshgrid(s, s, indexing="ij")
    wgt = np.outer(ws, ws)
    x = XP - v
    u = UP + y
    z = x + 1j * y
    w = u + 1j * v
    # exact: |F|^2 e^{u y - v x} = poly * e^{-(x'^2+u'^2)/2} e^{y^2+v^2}
    dens = wgt * np.exp(u * y - v * x + 0.5 * (XP ** 2 + UP ** 2))
    theta = quad.truncated_uniform(m_theta, 0.0, 2 * math.pi)
    total = 0.0
    for th, wt in zip(theta.nodes, theta.weights):
        c, sn = math.cos(th), math.sin(th)
        zr, wr = c * z - sn * w, sn * z + c * w
        F = sum(cf * specfun.special_hermite_fn(al, be, zr, wr) for (al, be), cf in coeffs.items())
        total += wt * float(np.sum(dens * np.abs(F) ** 2))
    return total / (2 * math.pi)


def _gutzmer_rhs_raw(coeffs: dict, y: float, v: float) -> float:
    """``sum_k (2 pi)^2 sum_a |c_{a,k}|^2 phi_k(2iy, 2iv)`` (``n = 1``)."""
    by_k = {}
    for (al, be), cf in coeffs.items():
        by_k[be] = by_k.get(be, 0.0) + abs(cf) ** 2
    r2 = y * y + v * v
    return sum((2 * math.pi) ** 2 * mass * specfun.phi_imaginary(k, 1, r2).to_float()
               for k, mass in by_k.items())


@functools.lru_cache(maxsize=8)
def _gutzmer_kappa(m: int, m_theta: int) -> float:
    unit = {(0, 0): 1.0}
    return _gutzmer_lhs(unit, 0.0, 0.0, m, m_theta) / _gutzmer_rhs_raw(unit, 0.0, 0.0)


def gutzmer_twisted_n1(coeffs, y: float, v: float, m: int = 16, m_theta: int = 32):
    """``(lhs, rhs)`` of Gutzmer's formula for ``f = sum c_{ab} Phi_{a,b}``, ``a, b <= 2``.

    The single global constant is read off at ``f = Phi_{0,0}``, ``y = v = 0``.
    """
    merged = {}
    for key, cf in dict(coeffs).items():
        al, be = (int(i) for i in key)
        if not (0 <= al <= 2 and 0 <= be <= 2):
            raise RangeError(f"indices must lie in [0, 2], got {key}")
        merged[(al, be)] = merged.get((al, be), 0.0) + complex(cf)
    if not merged:
        raise ConstraintError("empty coefficient set")
    lhs = _gutzmer_lhs(merged, float(y), float(v), m, m_theta)
    rhs = _gutzmer_kappa(m, m_theta) * _gutzmer_rhs_raw(merged, float(y), float(v))
    return lhs, rhs
