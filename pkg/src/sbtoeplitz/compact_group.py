"""Rank-one model of the compact-group case: spherical functions on the
noncompact dual, its heat kernel, the multiplier ``a(lambda)`` of a
``K``-biinvariant ``h`` and the Gaussian boundedness criterion.

The model has one positive root, ``pi(lambda) = lambda``, Weyl group
``{+1, -1}`` and ``J_1(H) = (2 sinh H)^2`` (complex-group multiplicity).
Spherical functions are normalized to ``psi_lambda(e) = 1``:
``psi_lambda(exp H) = sin(lambda H) / (lambda sinh H)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quadrature as quad
from .core import SequenceReport, SymbolSpec, make_report
from .errors import AccuracyError, ConstraintError, DivergenceError, RangeError

__all__ = [
    "RankOneModel",
    "c_function",
    "spherical_psi",
    "J1",
    "dual_heat_gamma",
    "DefiningRelation",
    "defining_relation",
    "multiplier_a",
    "multiplier_a_closed",
    "criterion_integral",
    "criterion_55",
    "criterion_55_closed",
]

_SERIES_CUT = 1e-4


@dataclass(frozen=True)
class RankOneModel:
    """``rho``, the spacing of the weight lattice ``{0, step, 2 step, ...}`` and ``t``."""

    rho: float = 1.0
    lattice_step: float = 1.0
    t: float = 0.25

    def __post_init__(self):
        for name in ("rho", "lattice_step", "t"):
            val = getattr(self, name)
            if not (val > 0 and math.isfinite(val)):
                raise ConstraintError(f"{name} must be a positive real, got {val!r}")

    def lattice(self, count: int) -> np.ndarray:
        return self.lattice_step * np.arange(int(count))


def c_function(lam) -> complex:
    """Harish-Chandra ``c(lambda) = pi(rho)/pi(i lambda)``, normalized so ``psi(e) = 1``."""
    return 1.0 / (1j * np.asarray(lam, dtype=complex))


def _sinc(s):
    """``sin(s)/s`` for complex ``s``."""
    s = np.asarray(s, dtype=complex)
    small = np.abs(s) < _SERIES_CUT
    safe = np.where(small, 1.0, s)
    s2 = s * s
    return np.where(small, 1 - s2 / 6 + s2 * s2 / 120, np.sin(safe) / safe)


def _h_over_sinh(H):
    """``H / sinh H``."""
    H = np.asarray(H, dtype=complex)
    small = np.abs(H) < _SERIES_CUT
    safe = np.where(small, 1.0, H)
    H2 = H * H
    return np.where(small, 1 - H2 / 6 + 7 * H2 * H2 / 360, safe / np.sinh(safe))


def _maybe_real(out, *args):
    if all(np.isrealobj(np.asarray(a)) for a in args):
        out = out.real
    return out.item() if out.ndim == 0 else out


def spherical_psi(lam, H):
    """``psi_lambda(exp H) = sin(lambda H)/(lambda sinh H)``, entire in ``lambda``.

    ``lambda = 0`` gives the limit ``H / sinh H``; imaginary ``lambda`` turn
    ``sin`` into ``sinh``.
    """
    lam = np.asarray(lam, dtype=complex)
    H = np.asarray(H)
    out = _sinc(lam * H) * _h_over_sinh(H)
    return _maybe_real(out, H) if np.all(lam.imag == 0) else (
        out.item() if out.ndim == 0 else out)


def J1(H):
    """Jacobian of the polar decomposition on the dual, ``(2 sinh H)^2``."""
    H = np.asarray(H)
    out = (2 * np.sinh(H)) ** 2
    return out.item() if out.ndim == 0 else out


def _heat_constant(s: float) -> float:
    # makes the defining relation hold with constant 1
    return 1.0 / (4 * s * math.sqrt(4 * math.pi * s))


def dual_heat_gamma(model: RankOneModel, H, s: float | None = None):
    """``gamma_s(exp H) = C_s e^{-s rho^2} (H / (2 sinh H)) e^{-H^2 / 4s}``.

    ``s`` defaults to ``model.t``; complex ``H`` is accepted (the kernel is
    entire).
    """
    s = model.t if s is None else float(s)
    if not s > 0:
        raise RangeError(f"heat time must be positive, got {s}")
    H = np.asarray(H)
    out = (_heat_constant(s) * math.exp(-s * model.rho ** 2)
           * 0.5 * _h_over_sinh(H) * np.exp(-H * H / (4 * s)))
    return _maybe_real(np.asarray(out), H)


# ---------------------------------------------------------------------------
# defining relation of the heat kernel


@dataclass(frozen=True)
class DefiningRelation:
    """``int gamma_{2t} psi_lambda J_1 / e^{-2t(lambda^2 + rho^2)}`` over a grid."""

    lambdas: np.ndarray
    ratios: np.ndarray

    @property
    def constant(self) -> float:
        return float(self.ratios[0])

    @property
    def spread(self) -> float:
        """Largest relative deviation from the value at the first grid point."""
        return float(np.max(np.abs(self.ratios / self.ratios[0] - 1.0)))


def _gamma_psi_integral(model: RankOneModel, lam: float, m: int) -> float:
    """``int_R gamma_{2t} psi_lambda J_1 dH``.

    Splitting ``psi_lambda`` by the Weyl group, both terms contribute the
    same, and ``gamma J_1 c(lambda) e^{i lambda H} / (e^H - e^{-H})`` is
    entire; shifting the contour to ``Im H = 4 t lambda`` (the saddle of
    ``e^{i lambda H - H^2/8t}``) removes the cancellation that makes the
    real-line integral useless once ``e^{-2t lambda^2}`` is small.
    """
    s = 2 * model.t
    if lam == 0:
        rule = quad.gauss_hermite(m)
        H = 2 * math.sqrt(s) * rule.nodes
        vals = dual_heat_gamma(model, H, s) * spherical_psi(0.0, H) * J1(H)
        return float(2 * math.sqrt(s) * np.dot(rule.weights, vals * np.exp(H * H / (4 * s))))
    rule = quad.gauss_hermite(m)
    scale = 2 * math.sqrt(s)
    H = scale * rule.nodes + 2j * s * lam
    vals = (dual_heat_gamma(model, H, s) * J1(H) * c_function(lam)
            * np.exp(1j * lam * H) / (np.exp(H) - np.exp(-H)))
    # divide out the Gaussian weight along the shifted line
    vals = vals * np.exp(rule.nodes ** 2)
    return float((2 * scale * np.dot(rule.weights, vals)).real)


def defining_relation(model: RankOneModel, lambdas, m: int = 64) -> DefiningRelation:
    """Ratios ``int gamma_{2t} psi_lambda J_1 dH / e^{-2t(lambda^2+rho^2)}``.

    Constant in ``lambda`` exactly when ``gamma`` is the heat kernel.  The
    rule size must be even so no node sits on a zero of ``sinh``.
    """
    if m % 2:
        raise RangeError(f"m must be even, got {m}")
    lambdas = np.asarray(lambdas, dtype=float)
    s = 2 * model.t
    ratios = []
    for lam in lambdas:
        val = _gamma_psi_integral(model, float(lam), m)
        ratios.append(val / math.exp(-s * (lam ** 2 + model.rho ** 2)))
    return DefiningRelation(lambdas, np.asarray(ratios))


# ---------------------------------------------------------------------------
# the multiplier a(lambda)


def _log_weyl_term(mu: float, H):
    """``log|c(-i mu) e^{mu H} J_1(H) / (e^H - e^{-H})|`` and its sign.

    One Weyl-group term of ``psi_{-i mu} J_1``; ``c(-i mu) = 1/mu``.
    """
    H = np.asarray(H, dtype=float)
    a = np.where(H == 0, 1e-300, np.abs(H))
    log2sinh = a + np.log(-np.expm1(-2 * a))
    return mu * H + log2sinh - math.log(mu), np.sign(H)


def _log_h(h: SymbolSpec, H):
    mant, logs = h.radial_scaled(np.abs(H))
    mant = np.asarray(mant, dtype=float)
    return np.log(np.abs(mant)) + logs, np.sign(mant)


def multiplier_a(h: SymbolSpec, model: RankOneModel, lam: float, m: int = 64,
                 tol: float = 1e-10) -> float:
    """``a(lambda) = int h(exp H) psi_{-i(lambda+rho)}(exp H) J_1(H) dH``.

    ``h`` is ``K``-biinvariant (even in ``H``), so both Weyl-group terms of
    ``psi_{-i mu} J_1``, ``mu = lambda + rho``, contribute equally and
    ``a = 2 int h(H) c(-i mu) e^{mu H} 2 sinh H dH``.  That integrand peaks
    at ``H = (mu+1)/(2b)``, where the Gauss-Hermite rule is recentered.
    """
    if not h.is_radial:
        raise ConstraintError(f"{h.name} is not K-biinvariant")
    b = -h.decay.gaussian_rate
    if not b > 0:
        raise DivergenceError(
            f"a(lambda) needs Gaussian decay of h to beat e^{{(lambda+rho)|H|}}; rate is {-b}")
    if not lam >= 0:
        raise RangeError(f"lambda must be non-negative, got {lam}")
    mu = lam + model.rho
    center = (mu + 1) / (2 * b)
    scale = 1 / math.sqrt(b)

    def estimate(mm):
        rule = quad.gauss_hermite(mm)
        H = center + scale * rule.nodes
        lh, hsign = _log_h(h, H)
        lw, wsign = _log_weyl_term(mu, H)
        logv = lh + lw + b * (H - center) ** 2
        top = float(np.max(logv))
        return 2 * scale * float(np.dot(rule.weights, hsign * wsign * np.exp(logv - top))), top

    v1, t1 = estimate(m)
    v2, t2 = estimate(2 * m)
    v1 *= math.exp(t1 - t2)
    if abs(v2 - v1) > tol * abs(v2):
        raise AccuracyError(f"a({lam}) unresolved with {2 * m} nodes",
                            (v1 * math.exp(t2), v2 * math.exp(t2)))
    return v2 * math.exp(t2)


def multiplier_a_closed(b: float, model: RankOneModel, lam: float) -> float:
    """``a(lambda)`` for ``h = e^{-b H^2}``:
    ``(2/mu) sqrt(pi/b) (e^{(mu+1)^2/4b} - e^{(mu-1)^2/4b})``."""
    mu = lam + model.rho
    return (2 / mu) * math.sqrt(math.pi / b) * math.exp((mu + 1) ** 2 / (4 * b)) \
        * -math.expm1(-mu / b)


# ---------------------------------------------------------------------------
# Gaussian boundedness criterion


def criterion_integral(g0: SymbolSpec, model: RankOneModel, lam: float, m: int = 32) -> float:
    """``int g0(exp H) H e^{-|H - 4t(lambda+rho)|^2 / 8t} dH``."""
    t = model.t
    rate = g0.decay.gaussian_rate
    A = 1 / (8 * t) - rate
    if not A > 0:
        raise DivergenceError(
            f"g0 grows like e^{{{rate} H^2}}, which the e^{{-H^2/8t}} envelope "
            f"(1/8t = {1 / (8 * t):.6g}) does not control")
    mpos = 4 * t * (lam + model.rho)
    center = mpos / (8 * t * A)
    scale = 1 / math.sqrt(A)
    rule = quad.gauss_hermite(m)
    H = center + scale * rule.nodes
    mant, logs = g0.radial_scaled(np.abs(H))
    logv = logs - (H - mpos) ** 2 / (8 * t) + A * (H - center) ** 2
    return float(scale * np.dot(rule.weights, np.asarray(mant) * H * np.exp(logv)))


def criterion_55(g0: SymbolSpec, model: RankOneModel, lambda_grid, m: int = 32) -> SequenceReport:
    """``L(lambda) = |int g1(H) e^{-|H-4t(lambda+rho)|^2/8t} dH| / |lambda+rho|``,
    ``g1(H) = g0(exp H) H``; bounded ``L`` means ``T_g`` is bounded."""
    lambda_grid = np.asarray(lambda_grid, dtype=float)
    if np.any(lambda_grid < 0):
        raise RangeError("lambda grid must be non-negative")
    vals = [abs(criterion_integral(g0, model, lam, m)) / abs(lam + model.rho)
            for lam in lambda_grid]
    return make_report(lambda_grid, np.asarray(vals))


def criterion_55_closed(g0: SymbolSpec, model: RankOneModel, lam: float) -> float:
    """Closed form of ``L(lambda)`` for ``g0 = 1`` and ``g0 = e^{-b H^2}``."""
    t = model.t
    b = getattr(g0, "b", 0.0) if g0.name == "group-gauss" else 0.0
    if g0.name not in ("group-gauss", "one"):
        raise ConstraintError(f"no closed form for {g0.name}")
    mpos = 4 * t * (lam + model.rho)
    A = 1 / (8 * t) + b
    center = mpos / (8 * t * A)
    const = -mpos ** 2 / (8 * t) + A * center ** 2
    return center * math.sqrt(math.pi / A) * math.exp(const) / (lam + model.rho)
