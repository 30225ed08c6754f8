"""Named identity checks shared by ``sbt verify`` and the test-suite.

Each check returns a :class:`CheckResult`; ``measured`` holds the numbers
the pass/fail decision was based on.  Checks are pure and independent, so
the runner may execute them in any order or in parallel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import compact_group as cg
from . import fock, hermite_bergman as hb, twisted as tw
from .core import (BOUNDED, Annulus, GaussH, GaussRadial, GaussY, GaussYV, GroupGauss, One,
                   PolyGaussRadial, SpaceParams)

__all__ = ["CheckResult", "CHECKS", "DEFAULT_TOLERANCES", "run_check"]


@dataclass(frozen=True)
class CheckResult:
    check: str
    params: dict
    measured: dict
    tolerance: float
    passed: bool
    notes: tuple = field(default=())

    def as_dict(self) -> dict:
        return {"check": self.check, "params": self.params, "measured": self.measured,
                "tolerance": self.tolerance, "pass": self.passed}


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


# ---------------------------------------------------------------------------
# Fock space


def check_lemma22(tol, n=None, t=None, kmax=None):
    """Direct vs heat-flow radial sequences.

    The annulus is run to ``k = 12``: the heat-flow route integrates an
    oscillating Laguerre weight whose cancellation exceeds double precision
    beyond about ``k = 15`` for this symbol.
    """
    kmax = 20 if kmax is None else kmax
    ns = [1, 2] if n is None else [n]
    cases = [(GaussRadial(1.0), kmax), (PolyGaussRadial(2, 1.0), kmax),
             (Annulus(1.0, 2.0), min(kmax, 12))]
    worst = 0.0
    for nn in ns:
        for g, km in cases:
            a = fock.radial_seq_direct(g, nn, km).values
            b = fock.radial_seq_heatflow(g, nn, km).values
            worst = max(worst, float(np.max(np.abs(a - b) / np.abs(a))))
    return {"n": ns, "kmax": kmax, "annulus_kmax": min(kmax, 12)}, {"max_rel_err": worst}, worst <= tol


def check_thm24(tol, n=None, t=None, kmax=None):
    ts = [0.25, 0.5] if t is None else [t]
    xi = np.linspace(-2.0, 2.0, 21)
    routes, closed = 0.0, 0.0
    for a in (0.5, 1.0, 2.0):
        for tt in ts:
            r = fock.heat_bergman_multiplier(GaussY(a), tt, xi)
            routes = max(routes, r.discrepancy)
            ref = (1 + 2 * tt * a) ** -0.5 * np.exp(-a * xi ** 2 / (1 + 2 * tt * a))
            closed = max(closed, float(np.max(np.abs(r.flow_at_xi - ref) / ref)))
    ok = routes <= tol and closed <= 1e-9
    return {"t": ts, "a": [0.5, 1.0, 2.0], "xi_points": 21}, \
        {"route_discrepancy": routes, "closed_form_err": closed}, ok


def check_identity_op(tol, n=None, t=None, kmax=None):
    kmax = 30 if kmax is None else kmax
    tt = 0.25 if t is None else t
    ns = [1, 2] if n is None else [n]
    fock_err, tw_err = 0.0, 0.0
    for nn in ns:
        fock_err = max(fock_err, float(np.max(np.abs(fock.radial_seq_direct(One(), nn, kmax).values - 1))))
        rep = tw.diag_seq(One(), SpaceParams(nn, tt), kmax)
        tw_err = max(tw_err, float(np.max(np.abs(rep.values - 1))))
    return {"n": ns, "t": tt, "kmax": kmax}, \
        {"fock_max_dev": fock_err, "twisted_max_dev": tw_err}, max(fock_err, tw_err) <= tol


def check_cor23(tol, n=None, t=None, kmax=None):
    nn = 1 if n is None else n
    out, ok = {}, True
    for beta in (0.0, 1.0):
        slope, _, _ = fock.laguerre_l1_exponent(beta, nn)
        expected = 0.5 - beta / 2
        out[f"slope_beta{beta:g}"] = slope
        ok &= abs(slope - expected) <= tol
    c = fock.cor23_check(Annulus(1.0, 2.0), 1, 30)
    out["annulus_premise"] = c.premise_holds
    out["annulus_verdict"] = c.report.verdict
    ok &= c.consistent and c.premise_holds
    return {"n": nn, "k_range": [100, 800]}, out, ok


# ---------------------------------------------------------------------------
# Hermite-Bergman space


def check_berezin(tol, n=None, t=None, kmax=None):
    tt = 0.25 if t is None else t
    rng = np.random.default_rng(20240601)
    r = 2 * np.sqrt(rng.random(20))
    th = 2 * np.pi * rng.random(20)
    zs = r * np.exp(1j * th)
    P = SpaceParams(1, tt)
    worst = max(hb.berezin(GaussRadial(1.0), P, z).rel_err for z in zs)
    return {"n": 1, "t": tt, "points": 20, "seed": 20240601}, {"max_rel_err": float(worst)}, worst <= tol


def check_semigroup_xy(tol, n=None, t=None, kmax=None):
    tt = 0.25 if t is None else t
    P = SpaceParams(1, tt)
    worst = 0.0
    for g in (GaussRadial(1.0), GaussRadial(0.5)):
        for z in (0.0, 0.7 - 0.2j, -1.1 + 0.9j):
            lhs, rhs = hb.semigroup_xy(g, P, z)
            worst = max(worst, _rel(complex(rhs), complex(lhs)))
    return {"n": 1, "t": tt}, {"max_rel_err": worst}, worst <= tol


def check_example36(tol, n=None, t=None, kmax=None):
    alphas = np.linspace(-1.0, 0.5, 7)
    ts = np.linspace(0.1, 0.5, 5)
    mism, ratio_err = 0, 0.0
    for a in alphas:
        for tt in ts:
            ex = hb.example36(float(a), float(tt))
            if (ex.sign_test >= 0) != (ex.verdict == BOUNDED):
                mism += 1
            rep, _ = hb.example36_sequence(float(a), float(tt), 16)
            v = rep.values
            ratio_err = max(ratio_err, float(np.max(np.abs(v[1:] / v[:-1] - ex.ratio) / abs(ex.ratio))))
    return {"alpha_grid": 7, "t_grid": 5}, {"verdict_mismatches": mism, "max_ratio_err": ratio_err}, \
        mism == 0 and ratio_err <= tol


def check_radiality(tol, n=None, t=None, kmax=None):
    """Heat-flowed Gaussian symbols and the h-profiles, on and off the constraint."""
    tt = 0.25 if t is None else t
    P = SpaceParams(1, tt)
    radii = [0.3, 0.8, 1.5]
    on, off = 0.0, math.inf
    for a in (-0.1, 0.1, 0.3):
        b = hb.example36_beta(a, tt).real
        for bb, side in ((b, "on"), (1.1 * b, "off")):
            devs = [hb.radiality_check(hb.sigma_profile(GaussYV(a, bb), P), radii, tol=tol).max_rel_dev,
                    hb.radiality_check(hb.remark38_profile(a, bb, tt), radii, tol=tol).max_rel_dev]
            if side == "on":
                on = max(on, *devs)
            else:
                off = min(off, *devs)
    return {"t": tt, "alphas": [-0.1, 0.1, 0.3]}, \
        {"on_curve_max_dev": on, "perturbed_min_dev": off}, on <= tol and off > tol


def check_multiplier_from_h(tol, n=None, t=None, kmax=None):
    tt = 0.25 if t is None else t
    nn = 1 if n is None else n
    worst = 0.0
    for c in (1.5, 3.0):
        hm = hb.multiplier_from_h(GaussH(c), SpaceParams(nn, tt), 14)
        expected = math.exp(-4 * tt) * (c + 1) / (c - 1)
        worst = max(worst, float(np.max(np.abs(hm.ratios() - expected) / expected)))
    return {"n": nn, "t": tt, "c": [1.5, 3.0]}, {"max_ratio_err": worst}, worst <= tol


_HERMITE_COEFFS = [
    [(0, 1.0)],
    [(1, 1.0)],
    [(0, 1.0), (1, 0.5)],
    [(2, 1.0 + 1.0j)],
    [(0, 0.3), (2, -0.7), (3, 0.2j)],
    [(1, 1.0), (4, 0.25), (5, -0.5)],
]


def check_gutzmer_hermite(tol, n=None, t=None, kmax=None):
    worst = 0.0
    grid = [-1.0, 0.0, 1.0]
    for coeffs in _HERMITE_COEFFS:
        for y in grid:
            for v in grid:
                lhs, rhs = hb.gutzmer_hermite_n1(coeffs, y, v)
                worst = max(worst, _rel(lhs, rhs))
    return {"coefficient_sets": len(_HERMITE_COEFFS), "grid": grid}, {"max_rel_err": worst}, worst <= tol


# ---------------------------------------------------------------------------
# twisted Bergman space


_TWISTED_COEFFS = [
    {(0, 0): 1.0},
    {(0, 1): 1.0},
    {(0, 0): 1.0, (0, 1): 1.0},
    {(1, 2): 1.0, (2, 0): 0.5j, (0, 1): -0.3},
]


def check_gutzmer_twisted(tol, n=None, t=None, kmax=None):
    worst = 0.0
    for coeffs in _TWISTED_COEFFS:
        for y, v in ((0.0, 0.0), (0.2, 0.1), (-0.5, 0.4), (0.8, -0.6)):
            lhs, rhs = tw.gutzmer_twisted_n1(coeffs, y, v)
            worst = max(worst, _rel(lhs, rhs))
    return {"coefficient_sets": len(_TWISTED_COEFFS)}, {"max_rel_err": worst}, worst <= tol


def check_identity37(tol, n=None, t=None, kmax=None):
    ns = [1, 2] if n is None else [n]
    ts = [0.1, 0.25, 0.5] if t is None else [t]
    kmax = 20 if kmax is None else kmax
    worst, kappa_spread, kappas = 0.0, 0.0, {}
    for nn in ns:
        ks = []
        for tt in ts:
            r = tw.verify_identity_37(SpaceParams(nn, tt), kmax)
            worst = max(worst, r.max_rel_err)
            ks.append(r.kappa.kappa)
        kappas[nn] = ks[0]
        kappa_spread = max(kappa_spread, (max(ks) - min(ks)) / ks[0])
    measured = {"max_rel_err": worst, "kappa_spread": kappa_spread}
    if len(ns) == 1:
        measured["kappa"] = kappas[ns[0]]
    else:
        measured["kappa"] = {str(k): v for k, v in kappas.items()}
    return {"n": ns, "t": ts, "kmax": kmax}, measured, worst <= tol and kappa_spread <= 1e-8


def check_lemma43(tol, n=None, t=None, kmax=None):
    ts = [0.25, 0.5] if t is None else [t]
    kmax = 4 if kmax is None else kmax
    worst = 0.0
    for tt in ts:
        P = SpaceParams(1, tt)
        for x, u in ((0.0, 0.0), (1.0, 0.0), (0.5, 0.5)):
            for k in range(kmax + 1):
                worst = max(worst, tw.verify_lemma_43(P, k, x, u).rel_err)
    return {"n": 1, "t": ts, "kmax": kmax}, {"max_rel_err": worst}, worst <= tol


def check_diagonality(tol, n=None, t=None, kmax=None):
    tt = 0.25 if t is None else t
    d = tw.diagonality_check(GaussY(1.0), SpaceParams(1, tt), max_index=1)
    off, diag = d.off_diagonal_max, d.diagonal_rel_err
    return {"n": 1, "t": tt, "symbol": "gauss-y:a=1", "pairs": 16}, \
        {"off_diagonal_max": off, "diagonal_rel_err": diag}, off <= tol and diag <= 1e-5


def _x_dependent(x, y, u, v):
    return np.exp(-(x * x + y * y + v * v))


def check_invariance48(tol, n=None, t=None, kmax=None):
    tt = 0.25 if t is None else t
    P = SpaceParams(1, tt)
    shifts = [(0.5, 0.3), (1.0, 0.0), (-0.4, 0.8)]
    worst = max(tw.invariance_check_48(GaussY(1.0), P, s) for s in shifts)
    control = tw.invariance_check_48(_x_dependent, P, shifts[0], m=24)
    return {"n": 1, "t": tt, "shifts": [list(s) for s in shifts]}, \
        {"max_deviation": worst, "control_deviation": control}, worst <= tol and control > 1e-2


def check_isometry41(tol, n=None, t=None, kmax=None):
    tt = 0.25 if t is None else t
    pairs = [(0, 0), (1, 0), (0, 1), (2, 1), (1, 3)]
    err = tw.isometry_check(SpaceParams(1, tt), pairs)
    return {"n": 1, "t": tt, "pairs": [list(p) for p in pairs]}, {"max_rel_err": err}, err <= tol


# ---------------------------------------------------------------------------
# rank-one group


def check_group_defining(tol, n=None, t=None, kmax=None):
    ts = [0.25, 0.5] if t is None else [t]
    lams = np.arange(1, 11) * 0.5
    spread = max(cg.defining_relation(cg.RankOneModel(1.0, 1.0, tt), lams).spread for tt in ts)
    return {"t": ts, "lambda": [0.5, 5.0]}, {"spread": spread}, spread <= tol


def check_criterion55(tol, n=None, t=None, kmax=None):
    ts = [0.25, 0.5] if t is None else [t]
    worst = 0.0
    verdicts = []
    for tt in ts:
        model = cg.RankOneModel(1.0, 1.0, tt)
        rep = cg.criterion_55(One(), model, model.lattice(16))
        L = 4 * tt * math.sqrt(8 * math.pi * tt)
        worst = max(worst, float(np.max(np.abs(rep.values / L - 1))))
        verdicts.append(rep.verdict)
    return {"t": ts, "symbol": "one"}, {"max_rel_err": worst, "verdicts": verdicts}, \
        worst <= tol and all(v == BOUNDED for v in verdicts)


def check_group_multiplier(tol, n=None, t=None, kmax=None):
    model = cg.RankOneModel(1.0, 1.0, 0.25 if t is None else t)
    worst = 0.0
    for b in (0.5, 1.0, 2.0):
        for lam in model.lattice(12):
            worst = max(worst, _rel(cg.multiplier_a(GroupGauss(b), model, float(lam)),
                                    cg.multiplier_a_closed(b, model, float(lam))))
    return {"b": [0.5, 1.0, 2.0], "lambdas": 12}, {"max_rel_err": worst}, worst <= tol


# name -> (function, default tolerance)
CHECKS = {
    "lemma22": (check_lemma22, 1e-6),
    "thm24": (check_thm24, 1e-8),
    "identity-op": (check_identity_op, 1e-10),
    "cor23": (check_cor23, 0.1),
    "berezin": (check_berezin, 1e-5),
    "semigroup-xy": (check_semigroup_xy, 1e-8),
    "example36": (check_example36, 1e-8),
    "radiality": (check_radiality, 1e-8),
    "multiplier-from-h": (check_multiplier_from_h, 1e-10),
    "gutzmer-hermite": (check_gutzmer_hermite, 1e-4),
    "gutzmer-twisted": (check_gutzmer_twisted, 1e-3),
    "identity37": (check_identity37, 1e-6),
    "lemma43": (check_lemma43, 1e-5),
    "diagonality": (check_diagonality, 1e-6),
    "invariance48": (check_invariance48, 1e-4),
    "isometry41": (check_isometry41, 1e-4),
    "group-defining": (check_group_defining, 1e-8),
    "criterion55": (check_criterion55, 1e-10),
    "group-multiplier": (check_group_multiplier, 1e-9),
}

DEFAULT_TOLERANCES = {k: v[1] for k, v in CHECKS.items()}


def run_check(name: str, tol: float | None = None, **overrides) -> CheckResult:
    fn, default = CHECKS[name]
    tol = default if tol is None else float(tol)
    params, measured, ok = fn(tol, **overrides)
    return CheckResult(name, params, measured, tol, bool(ok))
