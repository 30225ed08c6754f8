"""Gaussian quadrature rules and the integration engine used by every oracle.

Rules are built Golub-Welsch style: nodes are eigenvalues of the Jacobi
matrix of the three-term recurrence, weights come from the Christoffel
function ``1 / sum_j p_j(x)^2`` evaluated in log space so that the tiny
outer Gauss-Hermite weights (``~e^{-2m}``) stay representable.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .core import DecayBudget
from .errors import AccuracyError, DivergenceError, RangeError
from .kernels import christoffel_log
from .scaled import ScaledValue

__all__ = [
    "Rule1D",
    "TensorRule",
    "gauss_hermite",
    "gauss_laguerre",
    "gauss_legendre",
    "truncated_uniform",
    "composite_legendre",
    "radial_integral",
    "integrate_nd",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-10
MAX_HERMITE = 512
MAX_LAGUERRE = 2048
MAX_DOUBLINGS = 6
_CHUNK = 1 << 17


@dataclass(frozen=True, eq=False)
class Rule1D:
    """One-dimensional rule ``sum_i w_i f(x_i)`` for the weight named by ``kind``.

    ``kind`` is one of ``gauss-hermite`` (weight ``e^{-x^2}``),
    ``gauss-laguerre`` (``x^alpha e^{-x}`` on ``[0, inf)``), ``gauss-legendre``
    and ``truncated-uniform`` (weight 1 on ``[lo, hi]``).
    """

    kind: str
    m: int
    nodes: np.ndarray
    log_weights: np.ndarray
    alpha: float = 0.0
    lo: float = -1.0
    hi: float = 1.0

    @property
    def weights(self) -> np.ndarray:
        return np.exp(self.log_weights)

    @property
    def is_gaussian_weight(self) -> bool:
        return self.kind == "gauss-hermite"

    def compensated_weights(self) -> np.ndarray:
        """Weights for integrating ``f`` itself (not ``f * weight``)."""
        if self.kind == "gauss-hermite":
            return np.exp(self.log_weights + self.nodes ** 2)
        if self.kind == "gauss-laguerre":
            return np.exp(self.log_weights + self.nodes
                          - self.alpha * np.log(self.nodes))
        return self.weights

    def integrate(self, f) -> float:
        """``sum w_i f(x_i)`` i.e. the weighted integral."""
        return np.dot(self.weights, f(self.nodes))

    def __len__(self):
        return self.m


def _golub_welsch(diag, off, mu0):
    x = eigh_tridiagonal(diag, off, eigvals_only=True)
    x = np.sort(x)
    logw = -christoffel_log(diag, off, mu0, x)
    return x, logw


@functools.lru_cache(maxsize=256)
def _hermite_cached(m):
    k = np.arange(1, m, dtype=float)
    x, logw = _golub_welsch(np.zeros(m), np.sqrt(k / 2.0), math.sqrt(math.pi))
    # symmetrize: the exact rule is even
    x = 0.5 * (x - x[::-1])
    logw = 0.5 * (logw + logw[::-1])
    x.setflags(write=False)
    logw.setflags(write=False)
    return Rule1D("gauss-hermite", m, x, logw)


def gauss_hermite(m: int) -> Rule1D:
    """``m``-point rule for ``int f(x) e^{-x^2} dx`` over the real line."""
    if int(m) != m or not 1 <= m <= MAX_HERMITE:
        raise RangeError(f"gauss_hermite needs 1 <= m <= {MAX_HERMITE}, got {m}")
    return _hermite_cached(int(m))


@functools.lru_cache(maxsize=256)
def _laguerre_cached(m, alpha):
    k = np.arange(m, dtype=float)
    diag = 2 * k + 1 + alpha
    off = np.sqrt(k[1:] * (k[1:] + alpha))
    x, logw = _golub_welsch(diag, off, math.gamma(alpha + 1) if alpha < 170 else math.inf)
    x.setflags(write=False)
    logw.setflags(write=False)
    return Rule1D("gauss-laguerre", m, x, logw, alpha=float(alpha))


def gauss_laguerre(m: int, alpha: float = 0.0) -> Rule1D:
    """``m``-point rule for ``int_0^inf f(x) x^alpha e^{-x} dx``."""
    if int(m) != m or not 1 <= m <= MAX_LAGUERRE:
        raise RangeError(f"gauss_laguerre needs 1 <= m <= {MAX_LAGUERRE}, got {m}")
    if not alpha > -1:
        raise RangeError(f"gauss_laguerre needs alpha > -1, got {alpha}")
    return _laguerre_cached(int(m), float(alpha))


@functools.lru_cache(maxsize=256)
def _legendre_cached(m):
    k = np.arange(1, m, dtype=float)
    x, logw = _golub_welsch(np.zeros(m), k / np.sqrt(4 * k * k - 1), 2.0)
    x = 0.5 * (x - x[::-1])
    logw = 0.5 * (logw + logw[::-1])
    return x, logw


def gauss_legendre(m: int, lo: float = -1.0, hi: float = 1.0) -> Rule1D:
    """Gauss-Legendre rule mapped to ``[lo, hi]``."""
    if int(m) != m or not 1 <= m <= MAX_LAGUERRE:
        raise RangeError(f"gauss_legendre needs 1 <= m <= {MAX_LAGUERRE}, got {m}")
    if not hi > lo:
        raise RangeError(f"empty interval [{lo}, {hi}]")
    x, logw = _legendre_cached(int(m))
    half = 0.5 * (hi - lo)
    return Rule1D("gauss-legendre", int(m), lo + half * (x + 1.0),
                  logw + math.log(half), lo=float(lo), hi=float(hi))


def truncated_uniform(m: int, lo: float, hi: float) -> Rule1D:
    """Equal-weight midpoint rule on ``[lo, hi]``.

    Spectrally accurate for periodic integrands over a full period, and for
    integrands that are negligible near both ends.
    """
    if int(m) != m or m < 1:
        raise RangeError(f"truncated_uniform needs m >= 1, got {m}")
    if not hi > lo:
        raise RangeError(f"empty interval [{lo}, {hi}]")
    h = (hi - lo) / m
    x = lo + h * (np.arange(m) + 0.5)
    return Rule1D("truncated-uniform", int(m), x, np.full(m, math.log(h)),
                  lo=float(lo), hi=float(hi))


def composite_legendre(edges, m: int):
    """Nodes and weights of an ``m``-point Gauss-Legendre rule on each panel."""
    edges = np.asarray(edges, dtype=float)
    x, logw = _legendre_cached(int(m))
    w = np.exp(logw)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


@dataclass(frozen=True, eq=False)
class TensorRule:
    """Product of one-dimensional rules."""

    factors: tuple

    def __init__(self, factors):
        object.__setattr__(self, "factors", tuple(factors))

    @property
    def dimension(self) -> int:
        return len(self.factors)

    @property
    def size(self) -> int:
        return int(np.prod([f.m for f in self.factors]))

    @classmethod
    def hermite(cls, m: int, dimension: int) -> "TensorRule":
        return cls([gauss_hermite(m)] * dimension)


# ---------------------------------------------------------------------------
# engine


def integrate_nd(f, rule: TensorRule, recentering=None, scales=None, *,
                 weighted: bool = False, normalized: bool = False) -> complex:
    """Integrate ``f`` over the product domain of ``rule``.

    ``f`` takes an ``(N, d)`` array of raw points and returns ``N`` values.
    Gauss-Hermite factors are shifted by ``recentering`` and stretched by
    ``scales``; by default the engine divides out the Gaussian weight it
    owns, so the result is the plain Lebesgue integral of ``f``.  With
    ``weighted=True`` the integral is taken against the rule's own weight
    (e.g. ``e^{-|x-c|^2}``) instead; ``normalized`` further divides by the
    mass of that weight.
    """
    d = rule.dimension
    if not 1 <= d <= 4:
        raise ValueError(f"integrate_nd supports 1 to 4 dimensions, got {d}")
    c = np.zeros(d) if recentering is None else np.asarray(recentering, dtype=float)
    s = np.ones(d) if scales is None else np.asarray(scales, dtype=float)
    if c.shape != (d,) or s.shape != (d,):
        raise ValueError(f"recentering/scales must have shape ({d},), "
                         f"got {c.shape} and {s.shape}")
    axes_x, axes_w = [], []
    mass = 1.0
    for i, fac in enumerate(rule.factors):
        if fac.kind == "gauss-hermite":
            x = c[i] + s[i] * fac.nodes
            w = s[i] * (fac.weights if weighted else fac.compensated_weights())
            mass *= s[i] * math.sqrt(math.pi)
        else:
            x = np.asarray(fac.nodes, dtype=float)
            w = fac.weights if weighted else fac.compensated_weights()
            mass *= float(np.sum(fac.weights))
        axes_x.append(x)
        axes_w.append(w)

    # flatten the grid lazily in chunks along the first axis
    inner_x = np.stack(np.meshgrid(*axes_x[1:], indexing="ij"), axis=-1).reshape(-1, d - 1) \
        if d > 1 else np.zeros((1, 0))
    inner_w = functools.reduce(np.multiply.outer, axes_w[1:]).ravel() if d > 1 else np.ones(1)
    per = max(1, _CHUNK // inner_w.size)
    total = 0j
    x0, w0 = axes_x[0], axes_w[0]
    for start in range(0, x0.size, per):
        xs = x0[start:start + per]
        pts = np.empty((xs.size, inner_w.size, d))
        pts[:, :, 0] = xs[:, None]
        pts[:, :, 1:] = inner_x[None, :, :]
        vals = np.asarray(f(pts.reshape(-1, d))).reshape(xs.size, inner_w.size)
        total += complex(np.sum(w0[start:start + per] * (vals @ inner_w)))
    if normalized:
        total /= mass
    return total


def _as_scaled_arrays(out, shape):
    if isinstance(out, tuple):
        mant, logs = out
        mant = np.broadcast_to(np.asarray(mant), shape).astype(complex)
        logs = np.broadcast_to(np.asarray(logs, dtype=float), shape)
        return mant, logs
    if isinstance(out, (list, np.ndarray)) and len(out) and isinstance(
            np.ravel(np.asarray(out, dtype=object))[0], ScaledValue):
        vals = np.ravel(np.asarray(out, dtype=object))
        return (np.array([v.mantissa for v in vals]),
                np.array([v.log_scale for v in vals]))
    arr = np.broadcast_to(np.asarray(out), shape).astype(complex)
    return arr, np.zeros(shape)


def _log_dot(logw, mant, logs):
    """``sum_i exp(logw_i) * mant_i * exp(logs_i)`` without overflow.

    Also returns the same sum of absolute values (the cancellation scale).
    """
    ok = mant != 0
    if not np.any(ok):
        return ScaledValue(0.0, 0.0), ScaledValue(0.0, 0.0)
    e = logw[ok] + logs[ok]
    top = float(np.max(e))
    terms = mant[ok] * np.exp(e - top)
    return (ScaledValue(complex(np.sum(terms)), top),
            ScaledValue(float(np.sum(np.abs(terms))), top))


def _radial_estimate(f, rate, n, m, support):
    if support is not None:
        lo, hi = support
        rule = gauss_legendre(m, lo, hi)
        r = rule.nodes
        mant, logs = _as_scaled_arrays(f(r), r.shape)
        logw = rule.log_weights + (2 * n - 1) * np.log(np.where(r > 0, r, 1e-300))
        return _log_dot(logw, mant, logs)
    c = -rate
    rule = gauss_laguerre(m, n - 1)
    s = rule.nodes
    r = np.sqrt(s / c)
    mant, logs = _as_scaled_arrays(f(r), r.shape)
    # int f r^{2n-1} dr = (2 c^n)^{-1} int f(r(s)) e^{s} s^{n-1} e^{-s} ds
    logw = rule.log_weights + s - math.log(2.0) - n * math.log(c)
    return _log_dot(logw, mant, logs)


def radial_integral(f, budget: DecayBudget, n: int, tol: float = DEFAULT_TOL, *,
                    support=None, m0: int = 16, scaled: bool = False,
                    max_doublings: int = MAX_DOUBLINGS, relative_to_abs: bool = False,
                    return_mass: bool = False):
    """``int_0^inf f(r) r^{2n-1} dr`` by Gauss-Laguerre after ``s = |rate| r^2``.

    ``f`` maps an array of radii to values, to a ``(mantissa, log_scale)``
    pair of arrays, or to a list of :class:`ScaledValue`.  The rule size is
    doubled from ``m0`` until successive estimates agree to ``tol``
    (relative).  A finite ``support=(lo, hi)`` switches to Gauss-Legendre on
    that interval and lifts the decay requirement.

    For oscillating integrands whose value is far below the size of the
    integrand, ``relative_to_abs`` measures the change between estimates
    against ``int |f| r^{2n-1} dr`` instead of the value itself.
    ``return_mass`` returns ``(value, mass)`` with that absolute integral
    as a :class:`ScaledValue`, so callers can judge the cancellation.
    """
    if support is None and not budget.gaussian_rate < 0:
        raise DivergenceError(
            f"radial integral needs Gaussian decay; budget rate is {budget.gaussian_rate} >= 0")
    rate = budget.gaussian_rate
    m = int(m0)
    prev, _ = _radial_estimate(f, rate, n, m, support)
    for _ in range(max_doublings):
        m *= 2
        cur, mass = _radial_estimate(f, rate, n, m, support)
        ref = mass if relative_to_abs else cur
        diff = cur - prev
        if diff.is_zero or diff.log_abs() <= math.log(tol) + ref.log_abs() \
                or (cur.is_zero and prev.is_zero):
            val = cur if scaled else cur.to_complex()
            return (val, mass) if return_mass else val
        prev = cur
    raise AccuracyError(
        f"radial integral did not reach tol={tol} with {m} nodes",
        (prev.to_complex(), cur.to_complex()))
