"""The fourteen acceptance criteria at their stated tolerances and time limits.

Each test prints one ``criterion NN PASS|FAIL`` line; the lines are also
collected into the terminal summary.
"""
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from sbtoeplitz import BOUNDED, fock, specfun
from sbtoeplitz import compact_group as cg
from sbtoeplitz import hermite_bergman as hb
from sbtoeplitz import twisted as tw
from sbtoeplitz.core import (Annulus, GaussRadial, GaussY, GaussYV, One, PolyGaussRadial,
                             SpaceParams)


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def _report(log, num, name, ok, detail, elapsed, limit):
    ok = bool(ok) and elapsed <= limit
    line = (f"criterion {num:02d} {'PASS' if ok else 'FAIL'} {name}: {detail} "
            f"[{elapsed:.2f}s / {limit}s]")
    log.append(line)
    print(line)
    assert ok, line


def _rel(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)) / np.abs(np.asarray(b))))


def test_01_route_equivalence(acceptance_log):
    worst = {}
    with Clock() as c:
        for g in (GaussRadial(1.0), PolyGaussRadial(2, 1.0), Annulus(1.0, 2.0)):
            for n in (1, 2):
                a = fock.radial_seq_direct(g, n, 20).values
                b = fock.radial_seq_heatflow(g, n, 20).values
                worst[g.render(), n] = _rel(b, a)
    bad = {k: v for k, v in worst.items() if v > 1e-6}
    detail = f"max rel err {max(worst.values()):.2e} (tol 1e-6)"
    if bad:
        detail += "; over tolerance: " + ", ".join(f"{s} n={n} {v:.1e}" for (s, n), v in bad.items())
    _report(acceptance_log, 1, "direct vs heat-flow radial sequences", not bad, detail, c.elapsed, 60)


def test_02_identity_operator(acceptance_log):
    with Clock() as c:
        dev = 0.0
        for n in (1, 2):
            dev = max(dev, float(np.max(np.abs(fock.radial_seq_direct(One(), n, 30).values - 1))))
            for t in (0.1, 0.25, 0.5):
                dev = max(dev, float(np.max(np.abs(tw.diag_seq(One(), SpaceParams(n, t), 30).values - 1))))
    _report(acceptance_log, 2, "identity symbol sequences", dev <= 1e-10,
            f"max deviation {dev:.2e} (tol 1e-10)", c.elapsed, 60)


def test_03_multiplier_routes(acceptance_log):
    xi = np.linspace(-2.0, 2.0, 21)
    routes = closed = 0.0
    with Clock() as c:
        for a in (0.5, 1.0, 2.0):
            for t in (0.25, 0.5):
                r = fock.heat_bergman_multiplier(GaussY(a), t, xi)
                routes = max(routes, r.discrepancy)
                ref = (1 + 2 * t * a) ** -0.5 * np.exp(-a * xi ** 2 / (1 + 2 * t * a))
                closed = max(closed, _rel(r.flow_at_xi, ref))
    _report(acceptance_log, 3, "multiplier routes and Gaussian closed form",
            routes <= 1e-8 and closed <= 1e-9,
            f"routes {routes:.2e} (tol 1e-8), closed form {closed:.2e} (tol 1e-9)", c.elapsed, 5)


def test_04_berezin(acceptance_log):
    rng = np.random.default_rng(7)
    zs = 2 * np.sqrt(rng.random(20)) * np.exp(2j * np.pi * rng.random(20))
    with Clock() as c:
        worst = max(hb.berezin(GaussRadial(1.0), SpaceParams(1, 0.25), z).rel_err for z in zs)
    _report(acceptance_log, 4, "Berezin transform equals heat flow", worst <= 1e-5,
            f"max rel err {worst:.2e} over 20 points (tol 1e-5)", c.elapsed, 30)


def test_05_gaussian_example(acceptance_log):
    mism, ratio_err = 0, 0.0
    with Clock() as c:
        for alpha in np.linspace(-1.0, 0.5, 7):
            for t in np.linspace(0.1, 0.5, 5):
                ex = hb.example36(float(alpha), float(t))
                sign = abs(alpha) ** 2 * math.sinh(4 * t) - 2 * alpha
                if (sign >= 0) != (ex.verdict == BOUNDED):
                    mism += 1
                # ratio from the defining formulas, independent of the module
                T = math.tanh(2 * t)
                lam = alpha / T * math.sinh(4 * t) / (2 - alpha * math.sinh(4 * t))
                rep, _ = hb.example36_sequence(float(alpha), float(t), 16)
                v = rep.values
                ratio_err = max(ratio_err, _rel(v[1:] / v[:-1], (1 + lam) / (1 - lam)))
    _report(acceptance_log, 5, "Gaussian example verdicts and geometric ratio",
            mism == 0 and ratio_err <= 1e-8,
            f"{mism} verdict mismatches of 35, ratio err {ratio_err:.2e} (tol 1e-8)", c.elapsed, 5)


def test_06_radiality(acceptance_log):
    t = 0.25
    P = SpaceParams(1, t)
    radii = [0.3, 0.8, 1.5]
    on_ok = off_ok = profile_ok = True
    with Clock() as c:
        for alpha in (-0.3, -0.1, 0.1, 0.3):
            T = math.tanh(2 * t)
            beta = alpha / T / (alpha + T)
            # the pair satisfies alpha coth2t - beta tanh2t = alpha beta
            assert abs(alpha / T - beta * T - alpha * beta) < 1e-12
            on_ok &= hb.radiality_check(hb.sigma_profile(GaussYV(alpha, beta), P), radii,
                                        tol=1e-8).is_radial
            off_ok &= not hb.radiality_check(hb.sigma_profile(GaussYV(alpha, 1.1 * beta), P), radii,
                                             tol=1e-8).is_radial
            profile_ok &= not hb.radiality_check(hb.remark38_profile(alpha, 1.1 * beta, t), radii,
                                                 tol=1e-8).is_radial
    _report(acceptance_log, 6, "radiality criterion", on_ok and off_ok and profile_ok,
            f"on-curve radial={on_ok}, perturbed non-radial={off_ok}, "
            f"profile non-radial={profile_ok}", c.elapsed, 5)


HERMITE_SETS = [
    [(0, 1.0)],
    [(1, 1.0)],
    [(0, 1.0), (1, 0.5)],
    [(2, 1.0 + 1.0j)],
    [(0, 0.3), (2, -0.7), (3, 0.2j)],
    [(1, 1.0), (4, 0.25), (5, -0.5)],
]


def test_07_gutzmer_hermite(acceptance_log):
    worst = 0.0
    with Clock() as c:
        for coeffs in HERMITE_SETS:
            for y in (-1.0, 0.0, 1.0):
                for v in (-1.0, 0.0, 1.0):
                    lhs, rhs = hb.gutzmer_hermite_n1(coeffs, y, v)
                    worst = max(worst, abs(lhs - rhs) / abs(rhs))
    _report(acceptance_log, 7, "Gutzmer formula n=1", worst <= 1e-4,
            f"max rel err {worst:.2e} over 6 sets x 9 points (tol 1e-4)", c.elapsed, 120)


def test_08_identity37(acceptance_log):
    worst, spread = 0.0, 0.0
    with Clock() as c:
        for n in (1, 2):
            kappas = []
            for t in (0.1, 0.25, 0.5):
                r = tw.verify_identity_37(SpaceParams(n, t), 20)
                worst = max(worst, r.max_rel_err)
                kappas.append(r.kappa.kappa)
            spread = max(spread, (max(kappas) - min(kappas)) / kappas[0])
    _report(acceptance_log, 8, "heat kernel against phi_k", worst <= 1e-6 and spread <= 1e-8,
            f"max rel err {worst:.2e} (tol 1e-6), kappa spread {spread:.2e} (tol 1e-8)", c.elapsed, 30)


def test_09_twisted_heat_flow(acceptance_log):
    worst = 0.0
    with Clock() as c:
        for t in (0.25, 0.5):
            for x, u in ((0.0, 0.0), (1.0, 0.0), (0.5, 0.5)):
                for k in range(5):
                    worst = max(worst, tw.verify_lemma_43(SpaceParams(1, t), k, x, u).rel_err)
    _report(acceptance_log, 9, "twisted heat flow of phi_k", worst <= 1e-5,
            f"max rel err {worst:.2e} (tol 1e-5)", c.elapsed, 300)


def test_10_diagonality(acceptance_log):
    with Clock() as c:
        d = tw.diagonality_check(GaussY(1.0), SpaceParams(1, 0.25), max_index=1)
    M = d.matrix
    off = M[~np.eye(M.shape[0], dtype=bool)]
    ok = off.size == 12 and d.off_diagonal_max <= 1e-6 and d.diagonal_rel_err <= 1e-5
    _report(acceptance_log, 10, "4-D matrix is diagonal", ok,
            f"{off.size} off-diagonal max {d.off_diagonal_max:.2e} (tol 1e-6), "
            f"diagonal vs sequence {d.diagonal_rel_err:.2e} (tol 1e-5)", c.elapsed, 600)


def test_11_invariance(acceptance_log):
    P = SpaceParams(1, 0.25)
    with Clock() as c:
        worst = max(tw.invariance_check_48(GaussY(1.0), P, s, max_index=1)
                    for s in ((0.5, 0.3), (1.0, 0.0), (-0.4, 0.8)))
        control = tw.invariance_check_48(lambda x, y, u, v: np.exp(-(x * x + y * y + v * v)), P,
                                         (0.5, 0.3), max_index=1, m=24)
    _report(acceptance_log, 11, "translation invariance", worst <= 1e-4 and control > 1e-2,
            f"max deviation {worst:.2e} (tol 1e-4), control {control:.2e} (> 1e-2)", c.elapsed, 600)


def test_12_laguerre_asymptotics(acceptance_log):
    slopes = {}
    with Clock() as c:
        for beta in (0.0, 1.0):
            slopes[beta], _, _ = fock.laguerre_l1_exponent(beta, 1, (100, 800))
    ok = all(abs(s - (0.5 - b / 2)) <= 0.1 for b, s in slopes.items())
    _report(acceptance_log, 12, "Laguerre integral exponent", ok,
            ", ".join(f"beta={b:g}: {s:.3f} (expect {0.5 - b / 2:g})" for b, s in slopes.items()),
            c.elapsed, 60)


def test_13_group(acceptance_log):
    spread, crit = 0.0, 0.0
    with Clock() as c:
        for t in (0.25, 0.5):
            model = cg.RankOneModel(1.0, 1.0, t)
            spread = max(spread, cg.defining_relation(model, np.arange(1, 11) * 0.5).spread)
            rep = cg.criterion_55(One(), model, model.lattice(16))
            crit = max(crit, _rel(rep.values.real, 4 * t * math.sqrt(8 * math.pi * t)))
    _report(acceptance_log, 13, "group defining relation and criterion", spread <= 1e-8 and crit <= 1e-10,
            f"ratio spread {spread:.2e} (tol 1e-8), L vs closed form {crit:.2e} (tol 1e-10)",
            c.elapsed, 5)


def test_14_verify_all(acceptance_log, tmp_path):
    outputs, codes, times = {}, [], []
    for fmt in ("csv", "json"):
        for run in range(2):
            path = tmp_path / f"verify{run}.{fmt}"
            with Clock() as c:
                proc = subprocess.run([sys.executable, "-m", "sbtoeplitz.cli", "verify", "all",
                                       "--threads", "1", "--format", fmt, "--out", str(path)],
                                      capture_output=True, text=True)
            times.append(c.elapsed)
            codes.append(proc.returncode)
            outputs.setdefault(fmt, []).append(path.read_bytes())
    same = all(a == b for a, b in outputs.values())
    _report(acceptance_log, 14, "sbt verify all", all(code == 0 for code in codes) and same,
            f"exit codes {codes}, byte-identical csv/json reruns={same}, slowest run",
            max(times), 900)
